"""Gauss, Jacobi, Jacobsthal and companion sums over F_q.

Each sum comes as a brute-force evaluator plus, where a closed form exists,
a separate function computing that closed form; the two never share code
beyond the field tables, so comparing them is a genuine check.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .cyclotomic import CycInt, quadratic_gauss_sum, reduce_root_of_unity_vector, sqrt_pstar_power
from .errors import TrivialCharacter, ZeroLead, ZeroShift
from .field import FieldSpec, PrimeCharData, make_field, quad_char_ext

MAX_POWER = 8


def _additive_sum(spec: FieldSpec, weights, args) -> CycInt:
    """sum(weights[i] * zeta^Tr(args[i]))."""
    tr = spec.trace_table[np.asarray(args, dtype=np.int64)]
    counts = np.bincount(tr, weights=np.asarray(weights, dtype=np.int64), minlength=spec.p)
    return CycInt(spec.p, np.rint(counts).astype(np.int64))


def gauss_sum(spec: FieldSpec) -> CycInt:
    """G(eta_m) by direct summation over F_q^*."""
    x = np.arange(1, spec.q)
    return _additive_sum(spec, quad_char_ext(spec, x), x)


def gauss_sum_closed_form(spec: FieldSpec) -> CycInt:
    sign = -1 if (spec.m - 1) % 2 else 1
    return sign * sqrt_pstar_power(spec.p, spec.m)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultChar:
    """Multiplicative character of order d: lambda(theta^k) = zeta_d^(k*power)."""

    spec: FieldSpec
    order: int
    power: int = 1

    def __post_init__(self):
        if (self.spec.q - 1) % self.order:
            raise ValueError(f"character order {self.order} does not divide q - 1")

    def exponent(self, x):
        """Residue mod d of the exponent of lambda(x); x must be nonzero."""
        return (self.spec.log[np.asarray(x, dtype=np.int64)] * self.power) % self.order

    def __pow__(self, j):
        return MultChar(self.spec, self.order, (self.power * j) % self.order)

    @property
    def is_trivial(self):
        return self.power % self.order == 0


def jacobi_sum(lam: MultChar, spec: FieldSpec | None = None) -> tuple[int, ...]:
    """J(lambda, eta_m) = sum over x != 0, 1 of lambda(x) eta_m(1 - x).

    Returned as coordinates in Z[zeta_d] reduced modulo Phi_d.
    """
    spec = spec or lam.spec
    if lam.is_trivial:
        raise TrivialCharacter("Jacobi sum needs a nontrivial character")
    d = lam.order
    x = np.arange(2, spec.q)
    eta = quad_char_ext(spec, spec.sub(1, x))
    vec = np.zeros(d, dtype=np.int64)
    np.add.at(vec, lam.exponent(x), eta)
    return reduce_root_of_unity_vector(vec, d)


def companion_sum_via_jacobi(spec: FieldSpec, n: int, a: int) -> tuple[int, ...]:
    """eta_m(a) * sum_{j=1}^{d-1} lambda^j(-a) J(lambda^j, eta_m), d = gcd(n, q-1).

    Coordinates in Z[zeta_d] modulo Phi_d; an integer I shows up as (I, 0, ...).
    """
    if a == 0:
        raise ZeroShift("shift must be nonzero")
    d = gcd(n, spec.q - 1)
    if d == 1:
        return (0,)
    lam = MultChar(spec, d)
    na = int(spec.neg(a))
    total = np.zeros(d, dtype=object)
    for j in range(1, d):
        J = jacobi_sum(lam**j, spec)
        shift = int((lam**j).exponent(na))
        for k, c in enumerate(J):
            total[(k + shift) % d] += c
    ea = int(quad_char_ext(spec, a))
    return reduce_root_of_unity_vector([ea * c for c in total], d)


def _check_power(n):
    if not 1 <= n <= MAX_POWER:
        raise ValueError(f"power n = {n} outside [1, {MAX_POWER}]")


def jacobsthal_sum(spec: FieldSpec, n: int, a: int) -> int:
    """H_n(a) = sum over x of eta_m(x) eta_m(x^n + a)."""
    _check_power(n)
    if a == 0:
        raise ZeroShift("shift must be nonzero")
    x = np.arange(spec.q)
    return int(np.sum(quad_char_ext(spec, x) * quad_char_ext(spec, spec.add(spec.pow(x, n), a))))


def companion_sum(spec: FieldSpec, n: int, a: int) -> int:
    """I_n(a) = sum over x of eta_m(x^n + a)."""
    _check_power(n)
    if a == 0:
        raise ZeroShift("shift must be nonzero")
    x = np.arange(spec.q)
    return int(np.sum(quad_char_ext(spec, spec.add(spec.pow(x, n), a))))


def eta_pair_sum(pcd: PrimeCharData, which: str = "SQ") -> int:
    """Sum over u, v in S (v != +-u) of eta(u + v), S the squares or non-squares of F_p."""
    S = sorted(pcd.sq if which.upper() == "SQ" else pcd.nsq)
    p = pcd.p
    return sum(pcd.eta(u + v) for u in S for v in S if v != u and v != (p - u) % p)


def eta_pair_sum_closed_form(pcd: PrimeCharData, which: str = "SQ") -> int:
    half = (pcd.p - 1) // 2 * (pcd.eta(2) + 1)
    return -half if which.upper() == "SQ" else half


def quad_exp_sum(spec: FieldSpec, a2: int, a1: int, a0: int) -> CycInt:
    """sum over x of zeta^Tr(a2 x^2 + a1 x + a0), brute force."""
    if a2 == 0:
        raise ZeroLead("leading coefficient must be nonzero")
    x = np.arange(spec.q)
    vals = spec.add(spec.add(spec.mul(a2, spec.mul(x, x)), spec.mul(a1, x)), a0)
    return _additive_sum(spec, np.ones(spec.q, dtype=np.int64), vals)


def quad_exp_sum_closed_form(spec: FieldSpec, a2: int, a1: int, a0: int) -> CycInt:
    """chi_1(a0 - a1^2 / (4 a2)) * eta_m(a2) * G(eta_m)."""
    if a2 == 0:
        raise ZeroLead("leading coefficient must be nonzero")
    shift = spec.sub(a0, spec.mul(spec.mul(a1, a1), spec.inv(spec.mul(4 % spec.p, a2))))
    phase = CycInt.zeta(spec.p, int(spec.trace_table[int(shift)]))
    return int(quad_char_ext(spec, a2)) * phase * gauss_sum_closed_form(spec)


# ---------------------------------------------------------------------------


def verify_lemmas(fields=((5, 1), (5, 2), (5, 3), (13, 1), (13, 2), (17, 1)), eta_primes=(5, 13, 17, 29)):
    """Run every character-sum identity; returns a list of (name, passed) pairs."""
    from .field import prime_char_data

    lines = []
    for p, m in fields:
        F = make_field(p, m)
        tag = f"F_{p}^{m}"
        lines.append((f"gauss closed form {tag}", gauss_sum(F) == gauss_sum_closed_form(F)))
        G = quadratic_gauss_sum(p)
        lines.append((f"G(eta)^2 = p* for p={p} [{tag}]", G * G == F.prime_char.p_star))
        lines.append((f"sigma_z(G) = eta(z) G for p={p} [{tag}]",
                      all(G.galois(z) == F.prime_char.eta(z) * G for z in range(1, p))))
        nz = range(1, F.q)
        lines.append((f"I_1(a) = 0 {tag}", all(companion_sum(F, 1, a) == 0 for a in nz)))
        lines.append((f"I_2(a) = -1 {tag}", all(companion_sum(F, 2, a) == -1 for a in nz)))
        for n in (1, 2, 3):
            ok = all(companion_sum(F, 2 * n, a) == companion_sum(F, n, a) + jacobsthal_sum(F, n, a) for a in nz)
            lines.append((f"I_{2 * n} = I_{n} + H_{n} {tag}", ok))
    F5 = make_field(5, 1)
    ok = all(quad_exp_sum(F5, a2, a1, a0) == quad_exp_sum_closed_form(F5, a2, a1, a0)
             for a2 in range(1, 5) for a1 in range(5) for a0 in range(5))
    lines.append(("quadratic exponential sum closed form F_5 (100 cases)", ok))
    F13 = make_field(13, 1)
    ok = all(companion_sum_via_jacobi(F13, 4, a) == (companion_sum(F13, 4, a), 0) for a in range(1, 13))
    lines.append(("companion sum via Jacobi sums p=13 d=4", ok))
    for p in eta_primes:
        pcd = prime_char_data(p)
        for which in ("SQ", "NSQ"):
            v = eta_pair_sum(pcd, which)
            lines.append((f"eta pair sum {which} p={p} = {v}", v == eta_pair_sum_closed_form(pcd, which)))
    return lines
