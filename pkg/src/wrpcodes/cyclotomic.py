"""Exact arithmetic in Z[zeta_p].

A :class:`CycInt` is a length-p integer vector ``c`` standing for
``sum(c[i] * zeta^i)``.  Since ``1 + zeta + ... + zeta^{p-1} = 0`` the vector
is only determined up to adding a constant to every entry; the canonical
representative has ``c[0] == 0``, i.e. coordinates in the integral basis
``zeta, ..., zeta^{p-1}``.  Coefficients are Python ints, so nothing overflows.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import BadUnit, MixedPrime


class CycInt:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != p:
            raise ValueError(f"expected {p} coefficients, got {len(coeffs)}")
        c0 = coeffs[0]
        self.p = p
        self.coeffs = tuple(c - c0 for c in coeffs)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, p):
        return cls(p, [0] * p)

    @classmethod
    def integer(cls, p, n: int):
        return cls(p, [n] + [0] * (p - 1))

    @classmethod
    def zeta(cls, p, k: int = 1):
        c = [0] * p
        c[k % p] = 1
        return cls(p, c)

    @classmethod
    def from_exponent_counts(cls, p, counts):
        """``sum(counts[c] * zeta^c)``; counts is any length-p sequence."""
        return cls(p, list(counts))

    # -- ring structure -----------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return CycInt.integer(self.p, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.p != self.p:
            raise MixedPrime(f"cannot combine Z[zeta_{self.p}] with Z[zeta_{other.p}]")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % p] += a * b
        return CycInt(p, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result, base = CycInt.integer(self.p, 1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycInt.integer(self.p, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        n = self.rational()
        if n is not None:
            return f"CycInt({self.p}, {n})"
        terms = [f"{c:+d}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycInt({self.p}, {' '.join(terms) or '0'})"

    def canonical(self):
        return self

    # -- Galois action and norms -------------------------------------------
    def galois(self, s: int) -> "CycInt":
        """sigma_s: zeta -> zeta^s."""
        p = self.p
        if s % p == 0:
            raise BadUnit("sigma_0 is not an automorphism")
        out = [0] * p
        for i, c in enumerate(self.coeffs):
            out[(s * i) % p] += c
        return CycInt(p, out)

    def conj(self) -> "CycInt":
        return self.galois(-1)

    def mag_squared(self) -> "CycInt":
        return self * self.conj()

    def rational(self) -> int | None:
        """The integer n if this equals n, else None."""
        tail = self.coeffs[1:]
        if all(c == tail[0] for c in tail):
            return -tail[0]
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def galois(z: CycInt, s: int) -> CycInt:
    return z.galois(s)


def mag_squared(z: CycInt) -> CycInt:
    return z.mag_squared()


def is_rational_int(z: CycInt) -> int | None:
    return z.rational()


@lru_cache(maxsize=None)
def quadratic_gauss_sum(p: int) -> CycInt:
    """G(eta) = sum over x in F_p^* of eta(x) zeta^x, the exact square root of p*."""
    c = [0] * p
    for x in range(1, p):
        c[x] = 1 if pow(x, (p - 1) // 2, p) == 1 else -1
    return CycInt(p, c)


@lru_cache(maxsize=None)
def sqrt_pstar_power(p: int, k: int) -> CycInt:
    """G(eta)^k; an integer (p*)^(k/2) when k is even."""
    return quadratic_gauss_sum(p) ** k


def mag_squared_rows(counts: np.ndarray) -> np.ndarray:
    """Vectorised |z|^2 for many z given as rows of exponent counts.

    Returns an int array of shape (rows, p): column k is the coefficient of
    zeta^k in z * conj(z) before canonicalisation.
    """
    counts = np.asarray(counts, dtype=np.int64)
    p = counts.shape[1]
    out = np.empty_like(counts)
    for k in range(p):
        out[:, k] = (counts * np.roll(counts, k, axis=1)).sum(axis=1)
    # column k above is sum_c n_c n_{c-k}, the coefficient of zeta^k
    return out


# ---------------------------------------------------------------------------
# Z[zeta_d] for small d, used only by the Jacobi-sum route of the character sums


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact polynomial division"
    return out


def reduce_root_of_unity_vector(vec, n: int) -> tuple[int, ...]:
    """Reduce ``sum(vec[i] * zeta_n^i)`` to coordinates modulo Phi_n (length phi(n))."""
    phi = list(cyclotomic_polynomial(n))
    a = [int(v) for v in vec]
    deg = len(phi) - 1
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i]
        if c:
            for j, pj in enumerate(phi):
                a[i - deg + j] -= c * pj
    return tuple(a[:deg])
