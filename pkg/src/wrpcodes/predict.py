"""Closed-form lengths, zero counts and weight tables for C_{D_{f,g}}.

Everything here is computed from the scalar invariants of two profiles
(p, m, s, t, signs, family and dual index) plus the closed-form counts in
:mod:`plateaued`; nothing touches the defining set.  The enumerators in
:mod:`codes` are the oracle these predictions are checked against.

Branches are named ``<group>/<index>``:

* group ``odd`` (s + t odd), ``even`` (s + t even, unbalanced pair) or
  ``even-balanced`` (s + t even, balanced pair);
* index ``half`` (l_f = (p-1)/2), ``full`` (l_f = p-1), ``two-1mod8`` or
  ``two-5mod8`` (l_f = 2, split by p mod 8).

At p = 5 the indices 2 and (p-1)/2 coincide, so ``half`` and ``two-5mod8``
both apply to the same pair and both must hold.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .charsums import companion_sum
from .codes import PREDICTED, CodeReport
from .errors import BadOrbit, UnsupportedIndexPair
from .field import make_field
from .plateaued import (WRP, WRPB, PlateauedProfile, bsq_formula, dual_level_formula, joint_formula,
                        special_formula)

GROUPS = ("odd", "even", "even-balanced")
INDICES = ("half", "full", "two-1mod8", "two-5mod8")
ALL_BRANCHES = tuple(f"{g}/{i}" for g in GROUPS for i in INDICES)


def _eta(p, c):
    c %= p
    return 0 if c == 0 else (1 if pow(c, (p - 1) // 2, p) == 1 else -1)


def _sqrt_p(p, k) -> Fraction:
    """sqrt(p)^k for even k, possibly negative."""
    if k % 2:
        raise ValueError(f"odd power {k} of sqrt(p) in a closed form")
    return Fraction(p) ** (k // 2)


def _int(x) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise ArithmeticError(f"closed form gave non-integer {x}")
    return int(x)


def _in_c2_of_4(p, x):
    return x % p != 0 and pow(x % p, (p - 1) // 4, p) == p - 1


@lru_cache(maxsize=None)
def _i4(p, c):
    return companion_sum(make_field(p, 1), 4, c % p)


@dataclass(frozen=True)
class PairInvariants:
    p: int
    m: int
    s: int
    t: int
    eps_f: int
    eps_g: int
    balanced: bool

    @property
    def ee(self):
        return self.eps_f * self.eps_g

    @property
    def tau(self):
        return 2 * self.m + self.s + self.t

    @property
    def gamma(self):
        return 2 * self.m - self.s - self.t

    @property
    def group(self):
        if (self.s + self.t) % 2:
            return "odd"
        return "even-balanced" if self.balanced else "even"


def invariants(pf: PlateauedProfile, pg: PlateauedProfile) -> PairInvariants:
    if pf.p != pg.p or pf.m != pg.m:
        raise UnsupportedIndexPair("profiles live on different fields")
    if pf.family not in (WRP, WRPB) or pf.family != pg.family:
        raise UnsupportedIndexPair(f"families {pf.family}/{pg.family} are not both WRP or both WRPB")
    return PairInvariants(pf.p, pf.m, pf.s, pg.s, pf.epsilon, pg.epsilon, pf.family == WRPB)


def index_names(p: int, l: int) -> list[str]:
    names = []
    if l == (p - 1) // 2:
        names.append("half")
    if l == p - 1:
        names.append("full")
    if l == 2:
        names.append("two-1mod8" if p % 8 == 1 else "two-5mod8")
    return names


def applicable_branches(pf: PlateauedProfile, pg: PlateauedProfile) -> list[str]:
    inv = invariants(pf, pg)
    p = inv.p
    if p % 4 != 1:
        raise UnsupportedIndexPair("the tables need p = 1 mod 4")
    if (p - 1) // 2 not in pg.indices:
        raise UnsupportedIndexPair(f"l_g must be (p-1)/2 = {(p - 1) // 2}; g has {list(pg.indices)}")
    out = []
    for l in pf.indices:
        for name in index_names(p, l):
            b = f"{inv.group}/{name}"
            if b not in out:
                out.append(b)
    if not out:
        raise UnsupportedIndexPair(f"l_f = {list(pf.indices)} is outside {{2, (p-1)/2, p-1}}")
    return out


def _pick_branch(pf, pg, branch):
    branches = applicable_branches(pf, pg)
    if branch is None:
        return branches[0]
    if branch not in branches:
        raise UnsupportedIndexPair(f"branch {branch} does not apply; applicable: {branches}")
    return branch


def length_formula(pf: PlateauedProfile, pg: PlateauedProfile) -> int | None:
    """|D_{f,g}| from the profiles, None when the pair is not both WRP or both WRPB."""
    try:
        inv = invariants(pf, pg)
    except UnsupportedIndexPair:
        return None
    return invariant_length(inv)


# ---------------------------------------------------------------------------
# zero counts N0(a, b)


def n0_class_value(inv: PairInvariants, index: str, inside: bool, u: int = 0, v: int = 0) -> int:
    """N0 for a codeword outside S_f x S_g, or inside with f*(a) = u, g*(b) = v."""
    p, m, ee, tau = inv.p, inv.m, inv.ee, inv.tau
    P = Fraction(p) ** (2 * m - 2)
    u, v = u % p, v % p
    group = inv.group
    if group == "odd":
        if not inside:
            return _int(P)
        R = (p - 1) * ee * _sqrt_p(p, tau - 3)
        if index == "half":
            return _int(P + _eta(p, u + v) * R)
        if index == "full":
            if u and v in (u, (-u) % p):
                return _int(P + Fraction(p - 1, 2) * ee * _eta(p, 2) * _eta(p, u) * _sqrt_p(p, tau - 3))
            a, b = _eta(p, u + v), _eta(p, u - v)
            return _int(P + R) if a == b == 1 else (_int(P - R) if a == b == -1 else _int(P))
        if index == "two-1mod8":
            if u == 0 or v == 0:
                return _int(P + _eta(p, u + v) * R)
            if _eta(p, u) == _eta(p, v):
                # the inner sum over h in F_p^* contributes -(eta(u) + eta(v)) sqrt(p), with no p - 1 factor
                return _int(P - 2 * _eta(p, u) * ee * _sqrt_p(p, tau - 3))
            return _int(P)
        if index == "two-5mod8":
            if u == 0 or v == 0:
                return _int(P + _eta(p, u + v) * R)
            r = v * pow(u, -1, p) % p
            return _int(P + ee * _sqrt_p(p, tau - 3) * _eta(p, u) * (_i4(p, r) - _eta(p, r)))
    elif group == "even":
        X = ee * _sqrt_p(p, tau - 2)
        if not inside:
            return _int(P + (p - 1) * ee * _sqrt_p(p, tau - 4))
        if index == "half":
            return _int(P + (p - 1) * X) if (u + v) % p == 0 else _int(P)
        if u == 0 and v == 0:
            return _int(P + (p - 1) * X)
        if index == "full":
            return _int(P + Fraction(p - 1, 2) * X) if u and v in (u, (-u) % p) else _int(P)
        if index == "two-1mod8":
            return _int(P + 2 * X) if _eta(p, u * v) == 1 else _int(P)
        if index == "two-5mod8":
            return _int(P + 4 * X) if u and _in_c2_of_4(p, v * pow(u, -1, p)) else _int(P)
    else:
        Y = ee * _sqrt_p(p, tau - 4)
        if not inside:
            return _int(P)
        if index == "half":
            return _int(P + (p - 1) ** 2 * Y) if (u + v) % p == 0 else _int(P - (p - 1) * Y)
        if u == 0 and v == 0:
            return _int(P + (p - 1) ** 2 * Y)
        if index == "full":
            if u and v in (u, (-u) % p):
                return _int(P + Fraction((p - 1) * (p - 2), 2) * Y)
            return _int(P - (p - 1) * Y)
        if index == "two-1mod8":
            return _int(P + (p + 1) * Y) if _eta(p, u * v) == 1 else _int(P - (p - 1) * Y)
        if index == "two-5mod8":
            hit = u and _in_c2_of_4(p, v * pow(u, -1, p))
            return _int(P + (3 * p + 1) * Y) if hit else _int(P - (p - 1) * Y)
    raise UnsupportedIndexPair(f"unknown branch {group}/{index}")


def index_value(p: int, index: str) -> int:
    return {"half": (p - 1) // 2, "full": p - 1}.get(index, 2)


@lru_cache(maxsize=None)
def n0_character_table(inv: PairInvariants, l_f: int, l_g: int) -> np.ndarray:
    """N0 straight from the orthogonality expansion, independent of any case analysis.

    Uses only W_{zf}(y a) = sigma_z(W_f(y a / z)), the dual index f*(c a) = c^l_f f*(a)
    and the quadratic Gauss sum sqrt(p) (p = 1 mod 4).  The sums over z, y in F_p^* of
    eta(z)^tau zeta^(z((y/z)^l_f u + (y/z)^l_g v)) are collected as exponent counts.
    Entry [u * p + v] is the value inside S_f x S_g with duals (u, v); the last entry
    is the value outside.
    """
    p, m, tau = inv.p, inv.m, inv.tau
    z = np.arange(1, p)[:, None]
    y = np.arange(1, p)[None, :]
    c = y * np.array([pow(int(a), -1, p) for a in range(1, p)])[:, None] % p
    cf = z * np.vectorize(lambda x: pow(int(x), l_f, p))(c) % p
    cg = z * np.vectorize(lambda x: pow(int(x), l_g, p))(c) % p
    sign = np.broadcast_to(np.array([_eta(p, a) ** tau for a in range(1, p)])[:, None], cf.shape).ravel()
    uu, vv = np.divmod(np.arange(p * p), p)
    ex = (uu[:, None] * cf.ravel()[None, :] + vv[:, None] * cg.ravel()[None, :]) % p
    counts = np.zeros((p * p + 1, p), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(p * p), ex.shape[1]), ex.ravel()), np.tile(sign, p * p))
    if not inv.balanced:
        # y = 0: W_f(0) W_g(0), nonzero only for unbalanced pairs
        counts[:, 0] += int(sign[:: p - 1].sum())
    sq = np.array([_eta(p, e) == 1 for e in range(1, p)])
    out = np.empty(p * p + 1, dtype=np.int64)
    for i, row in enumerate(counts):
        rest = row[1:]
        if tau % 2 == 0:
            if np.any(rest != rest[0]):
                raise ArithmeticError("character sum is not rational")
            delta = Fraction(int(row[0] - rest[0])) * p ** (tau // 2)
        else:
            # rest_e = alpha + beta eta(e); the rational part needs row[0] = alpha
            cs, cn = set(rest[sq].tolist()), set(rest[~sq].tolist())
            if len(cs) != 1 or len(cn) != 1:
                raise ArithmeticError("character sum is not in Q(sqrt p)")
            cs, cn = cs.pop(), cn.pop()
            if (cs + cn) % 2 or row[0] != (cs + cn) // 2:
                raise ArithmeticError("character sum is not rational")
            delta = Fraction((cs - cn) // 2) * p ** ((tau + 1) // 2)
        out[i] = _int((Fraction(p) ** (2 * m) + inv.eps_f * inv.eps_g * delta) / (p * p))
    out.flags.writeable = False
    return out


def n0_character_sum(inv: PairInvariants, l_f: int, l_g: int, inside: bool, u: int = 0, v: int = 0) -> int:
    p = inv.p
    return int(n0_character_table(inv, l_f, l_g)[(u % p) * p + v % p if inside else p * p])


def invariant_length(inv: PairInvariants) -> int:
    p, m = inv.p, inv.m
    base = p ** (2 * m - 1) - 1
    if inv.balanced or (inv.s + inv.t) % 2:
        return base
    return _int(base + Fraction(p - 1, p) * inv.ee * _sqrt_p(p, inv.tau))


def distribution_from_character_sums(inv: PairInvariants, index: str) -> dict[int, int]:
    """Weight distribution assembled from the character-sum N0 and the dual level counts."""
    p, m = inv.p, inv.m
    n = invariant_length(inv)
    lut = n0_character_table(inv, index_value(p, index), (p - 1) // 2)
    Nf = [dual_level_formula(p, m, inv.s, inv.eps_f, c) for c in range(p)]
    Ng = [dual_level_formula(p, m, inv.t, inv.eps_g, c) for c in range(p)]
    dist: dict[int, int] = {}
    for u in range(p):
        for v in range(p):
            w = n + 1 - int(lut[u * p + v])
            dist[w] = dist.get(w, 0) + Nf[u] * Ng[v]
    outside = p ** (2 * m) - sum(Nf) * sum(Ng)
    w = n + 1 - int(lut[-1])
    dist[w] = dist.get(w, 0) + outside
    # (a, b) = (0, 0) sits in the class of (0, 0) duals, or outside for balanced pairs
    w0 = n + 1 - int(lut[-1] if inv.balanced else lut[0])
    dist[w0] -= 1
    dist[0] = dist.get(0, 0) + 1
    return dict(sorted((w, c) for w, c in dist.items() if c))


def n0_closed_form(pf: PlateauedProfile, pg: PlateauedProfile, a: int, b: int, branch: str | None = None) -> int:
    from .errors import ZeroPair

    if a == 0 and b == 0:
        raise ZeroPair("N0 is defined for (a, b) != (0, 0)")
    br = _pick_branch(pf, pg, branch)
    inv = invariants(pf, pg)
    inside = bool(pf.support[a] and pg.support[b])
    return n0_class_value(inv, br.split("/")[1], inside, int(pf.dual[a]), int(pg.dual[b]))


@lru_cache(maxsize=None)
def _n0_lut(inv: PairInvariants, index: str) -> np.ndarray:
    p = inv.p
    lut = np.empty(p * p + 1, dtype=np.int64)
    for u in range(p):
        for v in range(p):
            lut[u * p + v] = n0_class_value(inv, index, True, u, v)
    lut[-1] = n0_class_value(inv, index, False)
    lut.flags.writeable = False
    return lut


def n0_table(pf: PlateauedProfile, pg: PlateauedProfile, branch: str | None = None) -> np.ndarray:
    """Closed-form N0 for every (a, b); entry [0, 0] is left at 0."""
    br = _pick_branch(pf, pg, branch)
    inv = invariants(pf, pg)
    index = br.split("/")[1]
    p = inv.p
    lut = _n0_lut(inv, index)
    inside = pf.support[:, None] & pg.support[None, :]
    lab = np.where(inside, pf.dual[:, None] * p + pg.dual[None, :], p * p)
    out = lut[lab]
    out[0, 0] = 0
    return out


# ---------------------------------------------------------------------------
# weight tables


def _table_rows(inv: PairInvariants, index: str) -> list[tuple[Fraction, Fraction]]:
    p, m, ee = inv.p, inv.m, inv.ee
    tau, gam = inv.tau, inv.gamma
    P = Fraction(p) ** (2 * m - 2)
    total = Fraction(p) ** (2 * m)
    i = next(x for x in range(1, p) if _eta(p, x) == 1)
    j = next(x for x in range(1, p) if _eta(p, x) == -1)

    def Nf(c):
        return dual_level_formula(p, m, inv.s, inv.eps_f, c)

    def Ng(c):
        return dual_level_formula(p, m, inv.t, inv.eps_g, c)

    def special(kind):
        return special_formula(p, m, inv.s, inv.t, inv.eps_f, inv.eps_g, kind)

    base = (p - 1) * P
    group = inv.group
    if group == "odd":
        r = _sqrt_p(p, tau - 3)
        if index == "half":
            g1 = Fraction(p) ** (gam - 1)
            rg = _sqrt_p(p, gam - 1)
            return [(base, total - (p - 1) * g1 - 1),
                    ((p - 1) * (P - r), Fraction(p - 1, 2) * (g1 + rg)),
                    ((p - 1) * (P + r), Fraction(p - 1, 2) * (g1 - rg))]
        if index == "full":
            E1, E2 = special("E1"), special("E2")
            BS = bsq_formula(p, m, inv.s, inv.t, inv.eps_f, inv.eps_g, "SQ")
            BN = bsq_formula(p, m, inv.s, inv.t, inv.eps_f, inv.eps_g, "NSQ")
            half_r = Fraction(1, 2) * ee * _eta(p, 2) * r
            return [(base, total - 1 - E1 - E2 - BS - BN),
                    ((p - 1) * (P - half_r), E1), ((p - 1) * (P + half_r), E2),
                    ((p - 1) * (P - ee * r), BS), ((p - 1) * (P + ee * r), BN)]
        E3, E4 = special("E3"), special("E4")
        if index == "two-1mod8":
            q4 = Fraction((p - 1) ** 2, 4)
            fi, fj = q4 * Nf(i) * Ng(i), q4 * Nf(j) * Ng(j)
            return [(base, total - 1 - E3 - E4 - fi - fj),
                    ((p - 1) * (P - ee * r), E3), ((p - 1) * (P + ee * r), E4),
                    (base + 2 * ee * r, fi), (base - 2 * ee * r, fj)]
        if index == "two-5mod8":
            rows = []
            inner = 0
            for u in range(1, p):
                for v in range(1, p):
                    c = v * pow(u, -1, p) % p
                    w = base - ee * r * _eta(p, u) * (_i4(p, c) - _eta(p, c))
                    fr = Nf(u) * Ng(v)
                    inner += fr
                    rows.append((w, Fraction(fr)))
            return [(base, total - 1 - E3 - E4 - inner),
                    ((p - 1) * (P - ee * r), E3), ((p - 1) * (P + ee * r), E4)] + rows
    elif group == "even":
        X = ee * _sqrt_p(p, tau - 2)
        outside = ((p - 1) * (P + (p - 1) * ee * _sqrt_p(p, tau - 4)), total - Fraction(p) ** gam)
        pg_ = Fraction(p) ** gam
        n00 = Nf(0) * Ng(0)
        if index == "half":
            g1 = Fraction(p) ** (gam - 1)
            rg = ee * _sqrt_p(p, gam - 2)
            return [(base, g1 + (p - 1) * rg - 1), ((p - 1) * (P + X), (p - 1) * (g1 - rg)), outside]
        if index == "full":
            F1 = special("F1")
            return [(base, n00 - 1), ((p - 1) * (P + Fraction(1, 2) * X), F1),
                    ((p - 1) * (P + X), pg_ - n00 - F1), outside]
        if index == "two-1mod8":
            F3 = special("F3")
            return [(base, n00 - 1), (base + (p - 3) * X, F3), ((p - 1) * (P + X), pg_ - n00 - F3), outside]
        if index == "two-5mod8":
            F3 = special("F3")
            return [(base, n00 - 1), (base + (p - 5) * X, Fraction(F3, 2)),
                    ((p - 1) * (P + X), pg_ - n00 - Fraction(F3, 2)), outside]
    else:
        Y = ee * _sqrt_p(p, tau - 4)
        pg_ = Fraction(p) ** gam
        n00 = Nf(0) * Ng(0)
        outside = (base, total - pg_ - 1)
        if index == "half":
            g1 = Fraction(p) ** (gam - 1)
            rg = ee * _sqrt_p(p, gam - 2)
            return [((p - 1) * (P - (p - 1) * Y), g1 + (p - 1) * rg),
                    ((p - 1) * (P + Y), (p - 1) * (g1 - rg)), outside]
        if index == "full":
            F1 = special("F1")
            return [((p - 1) * (P - (p - 1) * Y), n00), ((p - 1) * (P - Fraction(p - 2, 2) * Y), F1),
                    ((p - 1) * (P + Y), pg_ - n00 - F1), outside]
        if index == "two-1mod8":
            F3 = special("F3")
            return [((p - 1) * (P - (p - 1) * Y), n00), (base - (p + 1) * Y, F3),
                    ((p - 1) * (P + Y), pg_ - n00 - F3), outside]
        if index == "two-5mod8":
            F3 = Fraction(special("F3"), 2)
            return [((p - 1) * (P - (p - 1) * Y), n00), (base - (3 * p + 1) * Y, F3),
                    ((p - 1) * (P + Y), pg_ - n00 - F3), outside]
    raise UnsupportedIndexPair(f"unknown branch {group}/{index}")


def table_distribution(inv: PairInvariants, index: str) -> dict[int, int]:
    dist: dict[int, int] = {0: 1}
    for w, fr in _table_rows(inv, index):
        w, fr = _int(w), _int(fr)
        if fr < 0:
            raise ArithmeticError(f"negative frequency {fr} for weight {w}")
        if fr:
            dist[w] = dist.get(w, 0) + fr
    return dict(sorted(dist.items()))


def predicted_distribution(pf: PlateauedProfile, pg: PlateauedProfile, branch: str | None = None) -> CodeReport:
    br = _pick_branch(pf, pg, branch)
    inv = invariants(pf, pg)
    dist = table_distribution(inv, br.split("/")[1])
    total = sum(dist.values())
    if total != inv.p ** (2 * inv.m):
        raise ArithmeticError(f"table frequencies sum to {total}, not p^(2m)")
    return CodeReport(length_formula(pf, pg), 2 * inv.m, dist, PREDICTED, br, inv.p, None, 2, {})


def punctured_report(report: CodeReport) -> CodeReport:
    """Divide length and every weight by p - 1 (coordinates come in scalar orbits)."""
    p = report.p
    if report.n % (p - 1) or any(w % (p - 1) for w in report.dist):
        # happens when h_f != h_g: D is then not a union of scalar orbits
        raise BadOrbit("length or a weight is not divisible by p - 1")
    dist = {w // (p - 1): c for w, c in report.dist.items()}
    return CodeReport(report.n // (p - 1), report.k, dist, report.source,
                      (report.provenance + "/punctured").lstrip("/"), p, True, 3, {})


def minimality_threshold(pf: PlateauedProfile, pg: PlateauedProfile, branch: str | None = None) -> bool | None:
    """The gamma = 2m - s - t sufficient condition for minimality; None where none is stated."""
    br = _pick_branch(pf, pg, branch)
    inv = invariants(pf, pg)
    group, index = br.split("/")
    if group == "odd":
        return None if index == "two-5mod8" else inv.gamma >= 5
    if group == "even":
        return inv.gamma >= (4 if inv.ee == 1 else 6)
    return inv.gamma >= 4
