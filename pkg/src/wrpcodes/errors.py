"""Exception hierarchy shared by all modules."""


class WRPError(Exception):
    """Base class for every error raised by this package."""


# field
class NotPrime(WRPError, ValueError):
    pass


class Reducible(WRPError, ValueError):
    pass


class NoPrimitive(WRPError, RuntimeError):
    pass


class BadOrder(WRPError, ValueError):
    pass


# cyclotomic integers
class MixedPrime(WRPError, ValueError):
    pass


class BadUnit(WRPError, ValueError):
    pass


# character sums
class TrivialCharacter(WRPError, ValueError):
    pass


class ZeroShift(WRPError, ValueError):
    pass


class ZeroLead(WRPError, ValueError):
    pass


# plateaued functions
class BadExponent(WRPError, ValueError):
    pass


class NotPlateaued(WRPError, ValueError):
    pass


class NotWeaklyRegular(WRPError, ValueError):
    pass


class NoDualIndex(WRPError, ValueError):
    pass


class ParityMismatch(WRPError, ValueError):
    pass


# codes
class LengthMismatch(WRPError, RuntimeError):
    pass


class ZeroPair(WRPError, ValueError):
    pass


class UnsupportedIndexPair(WRPError, ValueError):
    pass


class BadOrbit(WRPError, RuntimeError):
    pass


# cli
class ConfigError(WRPError, ValueError):
    pass


class MismatchError(WRPError, RuntimeError):
    """Two routes to the same quantity disagree; ``diff`` holds the details."""

    def __init__(self, message, diff=None):
        super().__init__(message)
        self.diff = diff or {}


class SpaceTooLarge(WRPError, ValueError):
    pass
