"""Exact arithmetic in F_p and F_{p^m}.

Elements of F_q are plain integers in ``range(q)``: the element
``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` of F_p[x]/(modulus) is stored as
``c_0 + c_1 p + ... + c_{m-1} p^{m-1}``.  The prime subfield F_p is therefore
the range ``0..p-1`` and integer literals embed unchanged.  Every bulk
operation accepts numpy arrays of such integers.

Discrete logarithms base the designated primitive element ``theta`` are
tabulated once at construction; multiplication, powering and the quadratic
character all go through those tables.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BadOrder, NoPrimitive, NotPrime, Reducible

MAX_Q = 5**6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists lowest degree first


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, f, p):
    a = [c % p for c in a]
    f = _trim(f)
    inv_lead = pow(f[-1], -1, p)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _trim(a[:df]) if df > 0 else []


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def poly_powmod(a, e, f, p):
    result, base = [1], poly_mod(a, f, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), f, p)
        base = poly_mod(poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_mod(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def is_irreducible(f, p) -> bool:
    """Rabin's test for a monic ``f`` of degree m over F_p."""
    f = _trim(f)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    # a root means a linear factor; cheap early exit
    for r in range(p):
        if sum(c * pow(r, i, p) for i, c in enumerate(f)) % p == 0:
            return False
    if poly_sub(poly_powmod(x, p**m, f, p), x, p):
        return False
    for ell in prime_factors(m):
        h = poly_sub(poly_powmod(x, p ** (m // ell), f, p), x, p)
        if len(poly_gcd(h, f, p)) != 1:
            return False
    return True


def first_irreducible(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m, coefficients of x^{m-1}..x^0 in lex order."""
    for tail in itertools.product(range(p), repeat=m):
        f = list(reversed(tail)) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise Reducible(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^m} = F_p[x]/(modulus) with a verified primitive element.

    ``modulus`` is the coefficient tuple lowest degree first, leading 1 included.
    ``theta`` is the integer encoding of the primitive element.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    theta: int
    exp: np.ndarray = field(repr=False, compare=False)
    log: np.ndarray = field(repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    @cached_property
    def powers_of_p(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    @cached_property
    def digits(self) -> np.ndarray:
        """``digits[x]`` is the coefficient vector of element x."""
        x = np.arange(self.q, dtype=np.int64)
        return (x[:, None] // self.powers_of_p[None, :]) % self.p

    @cached_property
    def trace_table(self) -> np.ndarray:
        """``trace_table[x] = Tr(x)`` for every x in F_q, values in F_p."""
        q, p = self.q, self.p
        x = np.arange(q, dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for i in range(self.m):
            acc = self.add(acc, self.pow(x, p**i))
        if np.any(acc >= p):
            raise RuntimeError("trace left the prime subfield")
        return acc.astype(np.int64)

    @cached_property
    def trace_product_table(self) -> np.ndarray:
        """``T[b, x] = Tr(b*x)``; q x q array of int16, the workhorse of the Walsh transform."""
        x = np.arange(self.q, dtype=np.int64)
        return self.trace_table[self.mul(x[:, None], x[None, :])].astype(np.int16)

    @cached_property
    def quad_char_table(self) -> np.ndarray:
        lg = self.log
        out = np.where(lg % 2 == 0, 1, -1).astype(np.int64)
        out[0] = 0
        return out

    @cached_property
    def prime_char(self) -> "PrimeCharData":
        return prime_char_data(self.p)

    # -- bulk arithmetic on integer encodings --------------------------------
    def encode(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self.powers_of_p

    def add(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        return self.encode(self.digits[a] + self.digits[b])

    def sub(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        return self.encode(self.digits[a] - self.digits[b])

    def neg(self, a):
        return self.encode(-self.digits[np.asarray(a, dtype=np.int64)])

    def mul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        prod = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        res = self.exp[(self.log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, res)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def theta_pow(self, k: int) -> int:
        return int(self.exp[k % (self.q - 1)])

    # -- scalar conveniences --------------------------------------------------
    def element(self, value) -> "FieldElement":
        """Wrap ``"t^k"``/``"0"`` syntax or an F_p integer literal."""
        return FieldElement(self, parse_element(self, value))

    def elements(self):
        return range(self.q)

    def nonzero(self):
        return range(1, self.q)

    def modulus_str(self) -> str:
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mon = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mon if c == 1 and i else f"{c}" if i == 0 else f"{c}*{mon}")
        return " + ".join(terms)

    def describe(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus),
                "modulus_str": self.modulus_str(), "theta": format_element(self, self.theta)}


@dataclass(frozen=True)
class FieldElement:
    """A single element of F_q; thin wrapper for interactive use."""

    spec: FieldSpec = field(repr=False)
    value: int

    @property
    def rep(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.spec.digits[self.value])

    @property
    def log(self) -> int | None:
        return None if self.value == 0 else int(self.spec.log[self.value])

    def _wrap(self, v):
        return FieldElement(self.spec, int(v))

    def _other(self, o):
        return o.value if isinstance(o, FieldElement) else parse_element(self.spec, o)

    def __add__(self, o):
        return self._wrap(self.spec.add(self.value, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.spec.sub(self.value, self._other(o)))

    def __rsub__(self, o):
        return self._wrap(self.spec.sub(self._other(o), self.value))

    def __mul__(self, o):
        return self._wrap(self.spec.mul(self.value, self._other(o)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.spec.neg(self.value))

    def __pow__(self, e: int):
        if e < 0:
            return self._wrap(self.spec.pow(self.spec.inv(self.value), -e))
        return self._wrap(self.spec.pow(self.value, e))

    def inverse(self):
        return self._wrap(self.spec.inv(self.value))

    def __truediv__(self, o):
        return self * self._wrap(self.spec.inv(self._other(o)))

    def __str__(self):
        return format_element(self.spec, self.value)


_ELEM_RE = re.compile(r"^\s*(-)?\s*t\s*\^\s*(-?\d+)\s*$")


def parse_element(spec: FieldSpec, text) -> int:
    """Parse ``"0"``, ``"t^k"``, ``"-t^k"`` or an integer literal of F_p."""
    if isinstance(text, FieldElement):
        return text.value
    if isinstance(text, (int, np.integer)):
        return int(text) % spec.p
    s = str(text).strip()
    mt = _ELEM_RE.match(s)
    if mt:
        v = spec.theta_pow(int(mt.group(2)))
        return int(spec.neg(v)) if mt.group(1) else v
    if s == "t":
        return spec.theta
    try:
        return int(s) % spec.p
    except ValueError:
        raise ValueError(f"cannot parse field element {text!r}") from None


def format_element(spec: FieldSpec, x: int) -> str:
    x = int(x)
    return "0" if x == 0 else f"t^{int(spec.log[x])}"


def order_key(spec: FieldSpec, x) -> np.ndarray:
    """Canonical ordering key: 0 first, then by discrete log."""
    x = np.asarray(x, dtype=np.int64)
    return np.where(x == 0, -1, spec.log[x])


def _candidate_thetas(p, m):
    q = p**m
    if m == 1:
        return range(q)
    first = list(range(p, 2 * p))
    return first + [c for c in range(q) if c not in first]


def _elem_to_poly(x, p, m):
    return _trim([(x // p**i) % p for i in range(m)])


def _poly_to_elem(a, p):
    return sum(int(c) * p**i for i, c in enumerate(a))


def make_field(p: int, m: int = 1, modulus=None, theta=None) -> FieldSpec:
    """Build and verify F_{p^m}.

    Without ``modulus`` the first irreducible monic polynomial in
    lexicographic coefficient order is used; without ``theta`` the first
    primitive element among x, x+1, x+2, ... (then the remaining elements).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise NotPrime("characteristic 2 is not supported")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    q = p**m
    if q > MAX_Q:
        raise ValueError(f"q = {q} exceeds the supported size {MAX_Q}")
    if modulus is None:
        modulus = first_irreducible(p, m)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(_trim(modulus)) != m + 1:
            raise Reducible(f"modulus {modulus} does not have degree {m}")
        if modulus[-1] != 1:
            inv = pow(modulus[-1], -1, p)
            modulus = tuple(c * inv % p for c in modulus)
        if not is_irreducible(list(modulus), p):
            raise Reducible(f"modulus {modulus} is reducible over F_{p}")
    f = list(modulus)
    factors = prime_factors(q - 1)

    def is_primitive(x):
        a = _elem_to_poly(x, p, m)
        if not a:
            return False
        if poly_powmod(a, q - 1, f, p) != [1]:
            return False
        return all(poly_powmod(a, (q - 1) // ell, f, p) != [1] for ell in factors)

    if theta is None:
        theta = next((c for c in _candidate_thetas(p, m) if is_primitive(c)), None)
        if theta is None:
            raise NoPrimitive("no primitive element found")
    else:
        theta = int(theta)
        if not is_primitive(theta):
            raise NoPrimitive(f"element {theta} is not primitive")

    exp = np.zeros(q - 1, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    t = [1]
    th = _elem_to_poly(theta, p, m)
    for k in range(q - 1):
        v = _poly_to_elem(t, p)
        if log[v] != -1:
            raise NoPrimitive("theta power cycle shorter than q-1")
        exp[k], log[v] = v, k
        t = poly_mod(poly_mul(t, th, p), f, p)
    exp.setflags(write=False)
    log.setflags(write=False)
    return FieldSpec(p=p, m=m, modulus=tuple(modulus), theta=int(theta), exp=exp, log=log)


def trace(spec: FieldSpec, x):
    """Absolute trace F_q -> F_p (vectorised)."""
    return spec.trace_table[np.asarray(x, dtype=np.int64)]


def quad_char_ext(spec: FieldSpec, x):
    """Quadratic character eta_m of F_q: 0, +1 on even logs, -1 on odd logs."""
    return spec.quad_char_table[np.asarray(x, dtype=np.int64)]


def cyclotomic_class(spec: FieldSpec, N: int, i: int) -> frozenset[int]:
    """The coset theta^i <theta^N> of the index-N subgroup of F_q^*."""
    q = spec.q
    if N < 2 or (q - 1) % N:
        raise BadOrder(f"N = {N} does not divide q - 1 = {q - 1}")
    if not 0 <= i < N:
        raise BadOrder(f"class index {i} outside [0, {N})")
    return frozenset(int(v) for v in spec.exp[np.arange(i, q - 1, N)])


def scalar_orbit_images(spec: FieldSpec, x):
    """``(z*x for z in F_p^*)`` stacked along a new leading axis."""
    x = np.asarray(x, dtype=np.int64)
    return np.stack([spec.mul(z, x) for z in range(1, spec.p)])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeCharData:
    """Quadratic character of F_p and its level sets."""

    p: int
    eta_table: tuple[int, ...]
    sq: frozenset[int]
    nsq: frozenset[int]
    p_star: int

    def eta(self, x: int) -> int:
        return self.eta_table[x % self.p]


def legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def prime_char_data(p: int) -> PrimeCharData:
    if not is_prime(p) or p == 2:
        raise NotPrime(f"{p} is not an odd prime")
    eta = tuple(legendre(x, p) for x in range(p))
    sq = frozenset(x for x in range(1, p) if eta[x] == 1)
    nsq = frozenset(x for x in range(1, p) if eta[x] == -1)
    p_star = eta[p - 1] * p
    pcd = PrimeCharData(p=p, eta_table=eta, sq=sq, nsq=nsq, p_star=p_star)
    assert len(sq) == len(nsq) == (p - 1) // 2
    if p % 4 == 1:
        assert p_star == p and (p - 1) in sq
    return pcd
