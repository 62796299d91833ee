"""The codes C_D built from a defining set D of the plane F_q x F_q.

A codeword is indexed by (a, b) in F_q^2 and has coordinates Tr(a x + b y)
for (x, y) in D.  Three routes to the weight distribution are offered:

``ENUMERATE``
    every nonzero codeword is evaluated coordinate by coordinate.
``CONVOLVE``
    the zero count N0(a, b) over the whole plane is a matrix product of two
    small histograms (x by f-value by Tr(ax)); exact for every codeword and
    cheap at q = 5^4, but only for full defining sets.
``BY_CLASS``
    codewords are grouped by (support membership, f*(a), g*(b)); one
    representative weight per class is computed and random codewords are
    spot-checked against it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import numpy as np

from .errors import BadOrbit, LengthMismatch, ZeroPair
from .field import FieldSpec, order_key
from .plateaued import NEITHER, PFunction, PlateauedProfile, dual_histogram

log = logging.getLogger(__name__)

ENUMERATE, CONVOLVE, BY_CLASS = "ENUMERATE", "CONVOLVE", "BY_CLASS"
ENUMERATED, PREDICTED = "ENUMERATED", "PREDICTED"


@dataclass(frozen=True)
class DefiningSet:
    spec: FieldSpec
    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)
    f: PFunction | None = field(default=None, repr=False)
    g: PFunction | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.xs)

    def pairs(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))


@dataclass(frozen=True)
class PuncturedSet:
    spec: FieldSpec
    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)
    parent: DefiningSet = field(repr=False)
    orbit_rule: str = "lexmin-log"

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def reps(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))


def _sorted_pairs(spec, xs, ys):
    kx, ky = order_key(spec, xs), order_key(spec, ys)
    idx = np.lexsort((ky, kx))
    return xs[idx], ys[idx]


def build_defining_set(f: PFunction, g: PFunction, prof_f: PlateauedProfile | None = None,
                       prof_g: PlateauedProfile | None = None) -> DefiningSet:
    """D = {(x, y) != (0, 0) : f(x) + g(y) = 0} in (log x, log y) order, zero first."""
    if f.spec != g.spec:
        raise ValueError("f and g must live on the same field")
    spec = f.spec
    mask = (f.values[:, None] + g.values[None, :]) % spec.p == 0
    mask[0, 0] = False
    xs, ys = np.nonzero(mask)
    xs, ys = _sorted_pairs(spec, xs.astype(np.int64), ys.astype(np.int64))
    D = DefiningSet(spec, xs, ys, f, g)
    if prof_f is not None and prof_g is not None:
        from .predict import length_formula

        expected = length_formula(prof_f, prof_g)
        if expected is not None and expected != D.n:
            raise LengthMismatch(f"|D| = {D.n} but the classified profiles predict {expected}")
    return D


def _coords(S):
    return S.spec, S.xs, S.ys


def codeword(S, a: int, b: int) -> np.ndarray:
    spec, xs, ys = _coords(S)
    T = spec.trace_product_table
    return (T[a, xs].astype(np.int64) + T[b, ys]) % spec.p


def codeword_weight(S, a: int, b: int) -> int:
    """Hamming weight of c(a, b) by direct evaluation of every coordinate."""
    if a == 0 and b == 0:
        raise ZeroPair("(a, b) = (0, 0) gives the zero codeword")
    return int(np.count_nonzero(codeword(S, a, b)))


def _enumerate_weights(S) -> np.ndarray:
    """q x q array of weights, entry [a, b]; entry [0, 0] is 0."""
    spec, xs, ys = _coords(S)
    q, p = spec.q, spec.p
    T = spec.trace_product_table
    Ty = T[:, ys].astype(np.int16)
    W = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        ua = T[a, xs].astype(np.int16)
        step = max(1, 4_000_000 // max(1, len(xs)))
        for lo in range(0, q, step):
            W[a, lo:lo + step] = np.count_nonzero((Ty[lo:lo + step] + ua) % p, axis=1)
    return W


def _convolve_weights(D: DefiningSet) -> np.ndarray:
    """Exact q x q weights via N0(a, b) = sum_{c, r} F[a, c, r] G[b, -c, -r]."""
    if D.f is None or D.g is None:
        raise ValueError("CONVOLVE needs a full defining set built from f and g")
    spec = D.spec
    q, p = spec.q, spec.p
    T = spec.trace_product_table.astype(np.int64)

    def hist(values):
        # H[a, c, r] = #{x : value(x) = c, Tr(a x) = r}
        flat = values[None, :] * p + T
        H = np.zeros((q, p * p), dtype=np.int64)
        for a in range(q):
            H[a] = np.bincount(flat[a], minlength=p * p)
        return H.reshape(q, p, p)

    F = hist(D.f.values)
    G = hist(D.g.values)
    neg = (-np.arange(p)) % p
    Gm = G[:, neg][:, :, neg]
    N0 = F.reshape(q, p * p) @ Gm.reshape(q, p * p).T
    W = (D.n + 1) - N0
    W[0, 0] = 0
    return W


def _hist(W: np.ndarray) -> dict[int, int]:
    vals, counts = np.unique(W, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def rank_mod_p(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.flatnonzero(A[r:, c])
        if not len(piv):
            continue
        i = r + piv[0]
        A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        A[others] = (A[others] - A[others, c][:, None] * A[r]) % p
        r += 1
    return r


def generator_matrix(S) -> np.ndarray:
    """2m x n generator: rows Tr(e_i x) then Tr(e_i y) over the power basis e_i."""
    spec, xs, ys = _coords(S)
    T = spec.trace_product_table
    basis = [spec.p**i for i in range(spec.m)]
    return np.vstack([T[np.ix_(basis, xs)], T[np.ix_(basis, ys)]]).astype(np.int64)


def dimension(S) -> int:
    return rank_mod_p(generator_matrix(S), S.spec.p)


def _projective_keys(S):
    """Column (x, y) scaled so its first nonzero F_p digit is 1, packed as one int."""
    spec, xs, ys = _coords(S)
    p, q = spec.p, spec.q
    digits = np.hstack([spec.digits[xs], spec.digits[ys]])
    nz = digits != 0
    first = digits[np.arange(len(digits)), np.argmax(nz, axis=1)]
    inv = np.array([0] + [pow(int(z), -1, p) for z in range(1, p)])[first]
    return spec.mul(inv, xs) * q + spec.mul(inv, ys), ~nz.any(axis=1)


def dual_distance(S) -> int:
    """1 if a zero column exists, 2 if two columns are proportional, else 3 (meaning >= 3)."""
    keys, zero = _projective_keys(S)
    if zero.any():
        return 1
    return 2 if len(np.unique(keys)) < len(keys) else 3


def dual_distance_at_least_3(S) -> bool:
    return dual_distance(S) >= 3


def puncture(D: DefiningSet) -> PuncturedSet:
    """One representative per F_p^*-orbit {(z x, z y)}, the member with the smallest order key."""
    spec = D.spec
    p, q = spec.p, spec.q
    keys = []
    for z in range(1, p):
        kx = order_key(spec, spec.mul(z, D.xs)) + 1
        ky = order_key(spec, spec.mul(z, D.ys)) + 1
        keys.append(kx * (q + 1) + ky)
    keys = np.array(keys)
    own, best = keys[0], keys.min(axis=0)
    _, sizes = np.unique(best, return_counts=True)
    if np.any(sizes != p - 1):
        raise BadOrbit(f"orbit sizes {sorted(set(sizes.tolist()))} differ from p - 1 = {p - 1}: D is not closed "
                       "under (x, y) -> (z x, z y), as happens when f and g have different homogeneity degrees")
    sel = own == best
    xs, ys = _sorted_pairs(spec, D.xs[sel], D.ys[sel])
    return PuncturedSet(spec, xs, ys, D)


@dataclass
class CodeReport:
    n: int
    k: int
    dist: dict[int, int]
    source: str = ENUMERATED
    provenance: str = ""
    p: int = 5
    dual_d_ge_3: bool | None = None
    dual_d: int | None = None
    checks: dict = field(default_factory=dict)

    @property
    def nonzero_weights(self):
        return sorted(w for w in self.dist if w)

    @property
    def d_min(self) -> int:
        return self.nonzero_weights[0]

    @property
    def w_max(self) -> int:
        return self.nonzero_weights[-1]

    @property
    def params(self) -> str:
        return f"[{self.n},{self.k},{self.d_min}]"

    @property
    def total(self) -> int:
        return sum(self.dist.values())

    @property
    def griesmer_gap(self) -> int:
        return self.n - griesmer_sum(self.k, self.d_min, self.p)

    @property
    def minimal(self) -> bool:
        return certify_minimal(self)

    def ab_status(self) -> str:
        r = Fraction(self.d_min, self.w_max)
        t = Fraction(self.p - 1, self.p)
        return "AB-sufficient" if r > t else ("inconclusive" if r == t else "not certified")

    def enumerator(self) -> str:
        parts = []
        for w in sorted(self.dist):
            c = self.dist[w]
            parts.append(str(c) if w == 0 else f"{c}z^{w}")
        return " + ".join(parts)

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "params": self.params,
                "distribution": [[w, self.dist[w]] for w in sorted(self.dist)],
                "d_min": self.d_min, "w_max": self.w_max, "source": self.source,
                "provenance": self.provenance, "dual_d_ge_3": self.dual_d_ge_3,
                "minimal_ab": self.ab_status(), "griesmer_gap": self.griesmer_gap,
                "griesmer_optimal": certify_griesmer(self), "checks": self.checks}


def first_moment_holds(dist: dict[int, int], n: int, p: int, m: int) -> bool:
    """sum w A_w = n (p-1) p^(2m-1): every coordinate is a nonzero functional of (a, b)."""
    return sum(w * c for w, c in dist.items()) == n * (p - 1) * p ** (2 * m - 1)


def _finish(S, dist, source, provenance, checks) -> CodeReport:
    spec = S.spec
    if sum(dist.values()) != spec.q**2:
        raise AssertionError("weight frequencies do not sum to p^(2m)")
    checks = dict(checks)
    checks["first_moment"] = first_moment_holds(dist, S.n, spec.p, spec.m)
    dd = dual_distance(S)
    return CodeReport(S.n, dimension(S), dict(sorted(dist.items())), source, provenance, spec.p,
                      dd >= 3, dd, checks)


def class_labels(prof_f: PlateauedProfile, prof_g: PlateauedProfile) -> np.ndarray:
    """q x q array: -1 outside S_f x S_g, else f*(a) * p + g*(b)."""
    p = prof_f.p
    inside = prof_f.support[:, None] & prof_g.support[None, :]
    lab = prof_f.dual[:, None] * p + prof_g.dual[None, :]
    return np.where(inside, lab, -1)


def weight_distribution(S, mode: str = ENUMERATE, prof_f: PlateauedProfile | None = None,
                        prof_g: PlateauedProfile | None = None, seed: int = 0,
                        spot_checks: int = 1000) -> CodeReport:
    spec = S.spec
    q = spec.q
    if mode == ENUMERATE:
        W = _enumerate_weights(S)
        return _finish(S, _hist(W), ENUMERATED, "enumerated", {})
    if mode == CONVOLVE:
        if isinstance(S, PuncturedSet):
            W = _convolve_weights(S.parent)
            if np.any(W % (spec.p - 1)):
                raise AssertionError("full weights not divisible by p - 1")
            W = W // (spec.p - 1)
        else:
            W = _convolve_weights(S)
        return _finish(S, _hist(W), ENUMERATED, "convolved", {})
    if mode != BY_CLASS:
        raise ValueError(f"unknown mode {mode!r}")
    if prof_f is None or prof_g is None:
        raise ValueError("BY_CLASS needs both profiles")
    labels = class_labels(prof_f, prof_g)
    flat = labels.ravel()
    flat_idx = np.arange(q * q)
    dist: dict[int, int] = {0: 1}
    class_weight = {}
    for lab in np.unique(flat):
        members = flat_idx[flat == lab]
        members = members[members != 0]
        if not len(members):
            continue
        a, b = divmod(int(members[0]), q)
        w = codeword_weight(S, a, b)
        class_weight[int(lab)] = w
        dist[w] = dist.get(w, 0) + len(members)
    # class sizes above are direct counts; cross-check them against the dual histograms
    Nf, Ng = dual_histogram(prof_f), dual_histogram(prof_g)
    inside = int(Nf.sum() * Ng.sum())
    sizes_ok = int(np.count_nonzero(flat >= 0)) == inside
    rng = np.random.default_rng(seed)
    picks = rng.integers(1, q * q, size=spot_checks)
    bad = [(int(i) // q, int(i) % q) for i in picks
           if codeword_weight(S, int(i) // q, int(i) % q) != class_weight[int(flat[i])]]
    checks = {"spot_checks": int(spot_checks), "spot_check_failures": len(bad), "class_sizes": sizes_ok}
    if bad:
        log.warning("BY_CLASS spot-check failed at %s", bad[:5])
    return _finish(S, dict(sorted(dist.items())), ENUMERATED, "class-computed", checks)


def griesmer_sum(k: int, d: int, p: int) -> int:
    return sum(ceil(Fraction(d, p**i)) for i in range(k))


def certify_griesmer(report: CodeReport) -> bool:
    return report.k >= 1 and report.d_min >= 1 and report.n == griesmer_sum(report.k, report.d_min, report.p)


def certify_minimal(report: CodeReport) -> bool:
    """Ashikhmin-Barg sufficient condition w_min / w_max > (p-1)/p, exactly."""
    return Fraction(report.d_min, report.w_max) > Fraction(report.p - 1, report.p)


def minimal_by_cover_scan(S, max_codewords: int = 5**4) -> bool:
    """Exhaustive minimality: no nonzero codeword covers one that is not its scalar multiple."""
    spec = S.spec
    q, p = spec.q, spec.p
    if q * q > max_codewords:
        raise ValueError("cover scan is only run at small scale")
    T = spec.trace_product_table
    C = (T[:, S.xs][:, None, :].astype(np.int64) + T[:, S.ys][None, :, :]) % p
    C = C.reshape(q * q, -1)[1:]
    # a degenerate code repeats codewords and maps some (a, b) to zero; only nonzero words count
    C = C[np.any(C != 0, axis=1)]
    supp = (C != 0).astype(np.int64)
    # projective form of each codeword, used to recognise scalar multiples
    first = C[np.arange(len(C)), np.argmax(C != 0, axis=1)]
    inv = np.array([0] + [pow(z, -1, p) for z in range(1, p)])[first]
    proj = (C * inv[:, None]) % p
    _, proj_id = np.unique(proj, axis=0, return_inverse=True)
    proj_id = proj_id.ravel()
    outside = supp @ (1 - supp).T  # [j, i] = |supp_j minus supp_i|
    covers = outside == 0          # supp_j subset of supp_i
    same = proj_id[:, None] == proj_id[None, :]
    return not np.any(covers & ~same)
