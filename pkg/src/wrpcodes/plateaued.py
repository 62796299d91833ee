"""Walsh-spectrum analysis of p-ary functions F_q -> F_p.

A function is tabulated once (:class:`PFunction`); its Walsh spectrum is kept
as exponent counts, ``counts[beta, c] = #{x : f(x) - Tr(beta x) = c}``, so
each Walsh value is the exact cyclotomic integer ``sum_c counts[beta, c] zeta^c``.
Classification then reads off the plateau order, the sign, the dual function
and the two homogeneity exponents without any floating point.

The counting helpers come in pairs: ``count_*`` counts directly over the
Walsh support, ``*_formula`` evaluates the closed form from the profile's
scalar invariants only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .cyclotomic import CycInt, mag_squared_rows, sqrt_pstar_power
from .errors import BadExponent, NotPlateaued, NotWeaklyRegular, ParityMismatch
from .field import FieldSpec, format_element, parse_element

WRP, WRPB, NEITHER = "WRP", "WRPB", "NEITHER"


@dataclass(frozen=True)
class PFunction:
    spec: FieldSpec
    values: np.ndarray = field(repr=False, compare=False)
    descriptor: tuple = ()

    def __post_init__(self):
        v = self.values
        if v.shape != (self.spec.q,) or v.min(initial=0) < 0 or v.max(initial=0) >= self.spec.p:
            raise ValueError("value table must have length q with entries in [0, p)")

    def __call__(self, x):
        return self.values[x]

    def describe(self) -> list[dict]:
        return [{"coeff": format_element(self.spec, c), "exp": e} for c, e in self.descriptor]


def normalize_descriptor(spec: FieldSpec, descriptor) -> tuple:
    """Accept [(coeff, exp), ...] or [{"coeff": ..., "exp": ...}, ...]."""
    out = []
    for term in descriptor:
        if isinstance(term, dict):
            c, e = term["coeff"], term["exp"]
        else:
            c, e = term
        out.append((parse_element(spec, c) if not isinstance(c, np.integer) else int(c), int(e)))
    return tuple(out)


def eval_descriptor(spec: FieldSpec, descriptor) -> PFunction:
    """f(x) = Tr(sum c_i x^e_i); coefficients in "t^k" syntax or raw F_p literals."""
    desc = normalize_descriptor(spec, descriptor)
    x = np.arange(spec.q, dtype=np.int64)
    acc = np.zeros(spec.q, dtype=np.int64)
    for c, e in desc:
        if not 1 <= e <= spec.q - 1:
            raise BadExponent(f"exponent {e} outside [1, {spec.q - 1}]")
        acc = spec.add(acc, spec.mul(c, spec.pow(x, e)))
    return PFunction(spec, spec.trace_table[acc].astype(np.int64), desc)


def from_values(spec: FieldSpec, values) -> PFunction:
    return PFunction(spec, np.asarray(values, dtype=np.int64) % spec.p)


@dataclass(frozen=True)
class WalshSpectrum:
    p: int
    counts: np.ndarray = field(repr=False)

    def __getitem__(self, beta) -> CycInt:
        return CycInt(self.p, self.counts[int(beta)])

    def __len__(self):
        return len(self.counts)

    def values(self):
        return [self[b] for b in range(len(self))]

    def magnitudes(self) -> list[int | None]:
        """|chi(beta)|^2 for every beta, None where it is not a rational integer."""
        rows = mag_squared_rows(self.counts)
        tail = rows[:, 1:]
        rational = np.all(tail == tail[:, :1], axis=1)
        vals = rows[:, 0] - rows[:, 1]
        return [int(v) if ok else None for v, ok in zip(vals, rational)]

    def parseval_holds(self) -> bool:
        mags = self.magnitudes()
        q = len(self)
        return None not in mags and sum(mags) == q * q


def walsh_transform(f: PFunction) -> WalshSpectrum:
    """chi_f(beta) = sum_x zeta^(f(x) - Tr(beta x)) for every beta, exactly."""
    spec, p, q = f.spec, f.spec.p, f.spec.q
    T = spec.trace_product_table
    counts = np.empty((q, p), dtype=np.int64)
    step = max(1, 2_000_000 // q)
    for lo in range(0, q, step):
        E = (f.values[None, :] - T[lo:lo + step]) % p
        rows = E.shape[0]
        flat = E + p * np.arange(rows)[:, None]
        counts[lo:lo + rows] = np.bincount(flat.ravel(), minlength=rows * p).reshape(rows, p)
    return WalshSpectrum(p, counts)


@dataclass(frozen=True)
class PlateauedProfile:
    p: int
    m: int
    s: int
    balanced: bool
    epsilon: int | None
    support: np.ndarray = field(repr=False, compare=False)
    dual: np.ndarray = field(repr=False, compare=False)
    h: int | None
    indices: tuple[int, ...]
    family: str
    f_zero: bool = True
    notes: tuple[str, ...] = ()

    @property
    def l(self) -> int | None:
        return self.indices[0] if self.indices else None

    @property
    def support_set(self) -> frozenset[int]:
        return frozenset(int(b) for b in np.flatnonzero(self.support))

    @property
    def support_size(self) -> int:
        return int(self.support.sum())

    def summary(self) -> dict:
        return {"s": self.s, "balanced": self.balanced, "epsilon": self.epsilon, "h": self.h,
                "l": self.l, "indices": list(self.indices), "family": self.family,
                "support_size": self.support_size, "notes": list(self.notes)}


def _even_exponents(p):
    return [h for h in range(2, p, 2) if gcd(h - 1, p - 1) == 1]


def homogeneity_exponents(spec: FieldSpec, table: np.ndarray, points=None) -> list[int]:
    """Even h with gcd(h-1, p-1) = 1 and table[z x] = z^h table[x] for z in F_p^*, x in points."""
    p = spec.p
    pts = np.arange(spec.q) if points is None else np.asarray(points, dtype=np.int64)
    found = []
    for h in _even_exponents(p):
        if all(np.array_equal(table[spec.mul(z, pts)], (pow(z, h, p) * table[pts]) % p) for z in range(2, p)):
            found.append(h)
    return found


def _candidate_table(p, k):
    """Map canonical coefficient tuple of eps * G^k * zeta^c -> (eps, c)."""
    base = sqrt_pstar_power(p, k)
    out = {}
    for eps in (1, -1):
        for c in range(p):
            out[(eps * base * CycInt.zeta(p, c)).coeffs] = (eps, c)
    return out


def classify(f: PFunction, spectrum: WalshSpectrum | None = None, strict: bool = False) -> PlateauedProfile:
    """Full plateaued profile of f.

    Raises NotPlateaued when |chi|^2 is not two-valued {0, p^(m+s)}.  A
    plateaued but not weakly regular f yields family NEITHER (or raises
    NotWeaklyRegular when ``strict``).
    """
    spec = f.spec
    p, m, q = spec.p, spec.m, spec.q
    W = spectrum or walsh_transform(f)
    mags = W.magnitudes()
    if None in mags:
        raise NotPlateaued("a Walsh value has non-rational magnitude")
    nonzero = sorted({v for v in mags if v})
    if len(nonzero) != 1:
        raise NotPlateaued(f"|chi|^2 takes values {sorted(set(mags))}")
    level = nonzero[0]
    k = 0
    while p**k < level:
        k += 1
    if p**k != level or not m <= k <= 2 * m:
        raise NotPlateaued(f"|chi|^2 = {level} is not p^(m+s)")
    s = k - m
    support = np.array([v != 0 for v in mags])
    if support.sum() != p ** (m - s):
        raise NotPlateaued("support size contradicts Parseval")
    balanced = not bool(support[0])
    cands = _candidate_table(p, m + s)
    dual = np.zeros(q, dtype=np.int64)
    signs = set()
    notes = []
    for beta in np.flatnonzero(support):
        hit = cands.get(W[beta].coeffs)
        if hit is None:
            signs.add(None)
            break
        signs.add(hit[0])
        dual[beta] = hit[1]
    weakly_regular = len(signs) == 1 and None not in signs
    if not weakly_regular:
        if strict:
            raise NotWeaklyRegular("Walsh sign varies over the support")
        return PlateauedProfile(p, m, s, balanced, None, support, dual, None, (), NEITHER,
                                f_zero=bool(f.values[0] == 0), notes=("not weakly regular",))
    eps = signs.pop()
    f_zero = bool(f.values[0] == 0)
    hs = homogeneity_exponents(spec, f.values)
    h = hs[0] if hs else None
    sup_pts = np.flatnonzero(support)
    ls = homogeneity_exponents(spec, dual, sup_pts)
    if len(ls) > 1 and np.any(dual[sup_pts]):
        raise AssertionError("two distinct dual indices agree on a nonzero dual")
    if not ls:
        notes.append("no dual index")
    elif len(ls) > 1:
        notes.append("dual vanishes on the support; index undetermined")
    family = NEITHER
    if f_zero and h is not None:
        family = WRPB if balanced else WRP
        if dual[0] != 0:
            raise AssertionError("dual(0) != 0 for a homogeneous weakly regular function")
    return PlateauedProfile(p, m, s, balanced, eps, support, dual, h, tuple(ls), family,
                            f_zero=f_zero, notes=tuple(notes))


def support_is_scaling_invariant(spec: FieldSpec, prof: PlateauedProfile) -> bool:
    pts = np.flatnonzero(prof.support)
    return all(np.all(prof.support[spec.mul(z, pts)]) for z in range(2, spec.p))


def zero_set_is_scaling_invariant(f: PFunction) -> bool:
    spec = f.spec
    zeros = np.flatnonzero(f.values == 0)
    return all(np.all(f.values[spec.mul(z, zeros)] == 0) for z in range(2, spec.p))


# ---------------------------------------------------------------------------
# counting over the Walsh support


def _eta(p, c):
    c %= p
    return 0 if c == 0 else (1 if pow(c, (p - 1) // 2, p) == 1 else -1)


def _sqrt_pstar_even(p, k) -> Fraction:
    """sqrt(p*)^k for even k (k may be negative)."""
    if k % 2:
        raise ValueError("odd power of sqrt(p*) is irrational")
    pstar = p if p % 4 == 1 else -p
    return Fraction(pstar) ** (k // 2)


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"closed form produced non-integer {x}")
    return int(x)


def dual_histogram(prof: PlateauedProfile) -> np.ndarray:
    """Direct count N[c] = #{beta in S_f : f*(beta) = c}."""
    return np.bincount(prof.dual[prof.support], minlength=prof.p).astype(np.int64)


def count_dual_level(prof: PlateauedProfile, c: int) -> int:
    return int(dual_histogram(prof)[c % prof.p])


def dual_level_formula(p, m, s, eps, c) -> int:
    c %= p
    e1 = _eta(p, -1)
    if (m - s) % 2 == 0:
        base = Fraction(p) ** (m - s - 1)
        corr = e1 ** (m + 1) * eps * _sqrt_pstar_even(p, m - s - 2)
        return _as_int(base + (p - 1) * corr if c == 0 else base - corr)
    base = p ** (m - s - 1)
    if c == 0:
        return base
    return _as_int(base + _eta(p, c) * e1**m * eps * _sqrt_pstar_even(p, m - s - 1))


def count_dual_level_formula(prof: PlateauedProfile, c: int) -> int:
    return dual_level_formula(prof.p, prof.m, prof.s, prof.epsilon, c)


def count_joint(prof_f: PlateauedProfile, prof_g: PlateauedProfile, c: int) -> int:
    """#{(a,b) in S_f x S_g : f*(a) + g*(b) = c} by convolving the direct histograms."""
    p = prof_f.p
    Nf, Ng = dual_histogram(prof_f), dual_histogram(prof_g)
    return int(sum(Nf[u] * Ng[(c - u) % p] for u in range(p)))


def joint_formula(p, m, s, t, eps_f, eps_g, c) -> int:
    c %= p
    gam = 2 * m - s - t
    ee = eps_f * eps_g
    if (s + t) % 2 == 0:
        root = _sqrt_pstar_even(p, gam)
        if c == 0:
            return _as_int(Fraction(p) ** (gam - 1) + Fraction(p - 1, p) * ee * root)
        return _as_int(Fraction(p) ** (gam - 1) - Fraction(1, p) * ee * root)
    if c == 0:
        return p ** (gam - 1)
    return _as_int(Fraction(p) ** (gam - 1) + _eta(p, c) * ee * _sqrt_pstar_even(p, gam - 1))


def count_joint_formula(prof_f, prof_g, c) -> int:
    return joint_formula(prof_f.p, prof_f.m, prof_f.s, prof_g.s, prof_f.epsilon, prof_g.epsilon, c)


def _squares(p):
    return {x for x in range(1, p) if _eta(p, x) == 1}


def count_bsq(prof_f, prof_g, which: str = "SQ") -> int:
    """#{(a,b) : f*(a)+g*(b) in S and f*(a)-g*(b) in S}, S = squares or non-squares."""
    p = prof_f.p
    target = 1 if which.upper() == "SQ" else -1
    Nf, Ng = dual_histogram(prof_f), dual_histogram(prof_g)
    return int(sum(Nf[u] * Ng[v] for u in range(p) for v in range(p)
                   if _eta(p, u + v) == target and _eta(p, u - v) == target))


def bsq_formula(p, m, s, t, eps_f, eps_g, which: str = "SQ") -> int:
    if p % 4 != 1:
        raise ValueError("closed form requires p = 1 mod 4")
    if (s + t) % 2 == 0:
        raise ParityMismatch("closed form requires s + t odd")
    sign = 1 if which.upper() == "SQ" else -1
    e2 = _eta(p, 2)
    ee = eps_f * eps_g
    gam = 2 * m - s - t

    def rp(k):
        return _sqrt_pstar_even(p, k)

    if (m - s) % 2 == 1 and (m - t) % 2 == 0:
        a_eps, a_pow, b_eps, b_pow = eps_f, m - t, eps_g, m - s - 1
    elif (m - s) % 2 == 0 and (m - t) % 2 == 1:
        a_eps, a_pow, b_eps, b_pow = eps_g, m - s, eps_f, m - t - 1
    else:  # pragma: no cover - s + t odd forces mixed parity
        raise ParityMismatch("m - s and m - t share parity although s + t is odd")
    inner = (Fraction(p - 1, 2) * rp(gam - 1) - sign * e2 * a_eps * rp(a_pow)
             + Fraction(p + 1, 2) * b_eps * rp(b_pow) + sign * (e2 + p) * ee)
    return _as_int(Fraction(p - 1, 2) * rp(gam - 3) * inner)


def count_bsq_formula(prof_f, prof_g, which="SQ") -> int:
    return bsq_formula(prof_f.p, prof_f.m, prof_f.s, prof_g.s, prof_f.epsilon, prof_g.epsilon, which)


SPECIAL_KINDS = ("E1", "E2", "E3", "E4", "F1", "F3", "F5")


def _in_c2_of_4(p, x):
    """x in theta^2 <theta^4> of F_p^*: a square that is not a fourth power."""
    return (p - 1) % 4 == 0 and x % p != 0 and pow(x, (p - 1) // 4, p) == p - 1


def _special_predicate(kind, p):
    sq = _squares(p)
    nsq = set(range(1, p)) - sq
    if kind == "E1":
        return lambda u, v: u in sq and v in (u, (-u) % p)
    if kind == "E2":
        return lambda u, v: u in nsq and v in (u, (-u) % p)
    if kind == "E3":
        return lambda u, v: (u == 0 and v in sq) or (v == 0 and u in sq)
    if kind == "E4":
        return lambda u, v: (u == 0 and v in nsq) or (v == 0 and u in nsq)
    if kind == "F1":
        return lambda u, v: u != 0 and v in (u, (-u) % p)
    if kind == "F3":
        return lambda u, v: (u * v) % p in sq
    if kind == "F5":
        return lambda u, v: u != 0 and v != 0 and _in_c2_of_4(p, v * pow(u, -1, p))
    raise ValueError(f"unknown special count {kind!r}")


def count_special(prof_f, prof_g, kind: str) -> int:
    """Direct count of the pairs (a, b) in S_f x S_g singled out by ``kind``."""
    p = prof_f.p
    pred = _special_predicate(kind, p)
    Nf, Ng = dual_histogram(prof_f), dual_histogram(prof_g)
    return int(sum(Nf[u] * Ng[v] for u in range(p) for v in range(p) if pred(u, v)))


def special_formula(p, m, s, t, eps_f, eps_g, kind: str) -> int:
    """Closed form of a special count through the level counts N_f, N_g."""
    i = next(iter(sorted(_squares(p))))
    j = next(x for x in range(1, p) if _eta(p, x) == -1)

    def Nf(c):
        return dual_level_formula(p, m, s, eps_f, c)

    def Ng(c):
        return dual_level_formula(p, m, t, eps_g, c)

    half = (p - 1) // 2
    if kind == "E1":
        return (p - 1) * Nf(i) * Ng(i)
    if kind == "E2":
        return (p - 1) * Nf(j) * Ng(j)
    if kind == "E3":
        return half * (Nf(0) * Ng(i) + Nf(i) * Ng(0))
    if kind == "E4":
        return half * (Nf(0) * Ng(j) + Nf(j) * Ng(0))
    if kind == "F1":
        return 2 * sum(Nf(c) * Ng(c) for c in range(1, p))
    if kind == "F3":
        return _as_int(Fraction((p - 1) ** 2, 4) * (Nf(i) * Ng(i) + Nf(j) * Ng(j)))
    if kind == "F5":
        return _as_int(Fraction((p - 1) ** 2, 8) * (Nf(i) * Ng(i) + Nf(j) * Ng(j)))
    raise ValueError(f"unknown special count {kind!r}")


def count_special_formula(prof_f, prof_g, kind):
    return special_formula(prof_f.p, prof_f.m, prof_f.s, prof_g.s, prof_f.epsilon, prof_g.epsilon, kind)


def derived_counts(prof_f, prof_g) -> dict[str, int]:
    """F_2, F_4, F_6: the support pairs not covered by F_1, F_3, F_5 or the zero-zero class."""
    gam_total = prof_f.support_size * prof_g.support_size
    n00 = count_dual_level(prof_f, 0) * count_dual_level(prof_g, 0)
    F1 = count_special(prof_f, prof_g, "F1")
    F3 = count_special(prof_f, prof_g, "F3")
    out = {"F2": gam_total - n00 - F1, "F4": gam_total - n00 - F3}
    if prof_f.p % 4 == 1:
        F5 = count_special(prof_f, prof_g, "F5")
        out["F5"] = F5
        out["F6"] = gam_total - n00 - F5
    return out
