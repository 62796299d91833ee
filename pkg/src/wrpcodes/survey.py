"""Cross-checks of predicted weight tables against searched specimen pairs.

Three sweeps are offered.  ``verify_pairs`` samples a few pairs per profile
signature and builds each code in full.  ``n0_sweep`` covers every pair of a
small search, comparing the closed-form zero counts with an exact convolution
for every (a, b); the per-function histograms are computed once, so each pair
costs one small matrix product.  ``all_pairs`` covers every pair of a larger
search by grouping functions whose histogram rows agree as multisets: the
weight multiset of C_{D_{f,g}} depends on f and g only through those row
multisets, so one exact computation per class pair settles all member pairs.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .codes import ENUMERATE, build_defining_set, weight_distribution
from .errors import UnsupportedIndexPair
from .plateaued import WRPB, PlateauedProfile
from .predict import ALL_BRANCHES, applicable_branches, n0_table, predicted_distribution
from .search import SearchHit, signature

log = logging.getLogger(__name__)

EXERCISED, UNEXERCISED, FAILED = "EXERCISED", "UNEXERCISED", "FAILED"


def unexercised_reason(branch: str, p: int, m_values) -> str:
    group, index = branch.split("/")
    if group == "even-balanced":
        return ("no balanced weakly regular plateaued function has an even homogeneity exponent "
                "when p^(m-1) is odd, so no WRPB specimen exists")
    if index == "two-1mod8" and p % 8 != 1:
        return f"needs p = 1 mod 8; searched p = {p}"
    if index == "two-5mod8" and p % 8 != 5:
        return f"needs p = 5 mod 8; searched p = {p}"
    return f"no specimen pair found at p = {p}, m in {sorted(set(m_values))}"


def usable_pair(pf: PlateauedProfile, pg: PlateauedProfile) -> list[str]:
    try:
        return applicable_branches(pf, pg)
    except UnsupportedIndexPair:
        return []


@dataclass
class BranchTally:
    pairs: int = 0
    failures: int = 0
    fields: set = field(default_factory=set)
    examples: list = field(default_factory=list)

    def status(self):
        if self.failures:
            return FAILED
        return EXERCISED if self.pairs else UNEXERCISED


@dataclass
class SurveyReport:
    p: int
    tallies: dict[str, BranchTally]
    m_values: tuple
    failures: list = field(default_factory=list)
    rank_deficits: list = field(default_factory=list)

    def status(self, branch):
        return self.tallies[branch].status()

    def rows(self):
        out = []
        for b in ALL_BRANCHES:
            t = self.tallies[b]
            st = t.status()
            row = {"branch": b, "status": st, "pairs": t.pairs, "failures": t.failures,
                   "fields": sorted(t.fields)}
            if st == UNEXERCISED:
                row["reason"] = unexercised_reason(b, self.p, self.m_values)
            out.append(row)
        return out

    def merge(self, other: "SurveyReport") -> "SurveyReport":
        tallies = {b: BranchTally() for b in ALL_BRANCHES}
        for rep in (self, other):
            for b, t in rep.tallies.items():
                tallies[b].pairs += t.pairs
                tallies[b].failures += t.failures
                tallies[b].fields |= t.fields
                tallies[b].examples += t.examples
        return SurveyReport(self.p, tallies, tuple(sorted(set(self.m_values) | set(other.m_values))),
                            self.failures + other.failures, self.rank_deficits + other.rank_deficits)


def _new_report(p, m_values):
    return SurveyReport(p, {b: BranchTally() for b in ALL_BRANCHES}, tuple(m_values))


def check_pair(hf: SearchHit, hg: SearchHit, mode: str = ENUMERATE) -> tuple[dict[str, bool], int | None]:
    """Build C_D for one pair and compare its (n, multiset of weights) with every applicable table.

    Returns the per-branch verdicts and the measured dimension.  The dimension
    is reported separately: a degenerate pair can match a table exactly as a
    multiset over all (a, b) while the tables' k = 2m claim fails.
    """
    pf, pg = hf.profile, hg.profile
    branches = usable_pair(pf, pg)
    if not branches:
        return {}, None
    D = build_defining_set(hf.function, hg.function, pf, pg)
    got = weight_distribution(D, mode, pf, pg)
    out = {}
    for b in branches:
        pred = predicted_distribution(pf, pg, b)
        out[b] = pred.dist == got.dist and pred.n == got.n
    return out, got.k


def verify_pairs(hits_f, hits_g, per_signature: int = 2, seed: int = 0, mode: str = ENUMERATE) -> SurveyReport:
    """Sample ``per_signature`` pairs for every (signature f, signature g) combination."""
    rng = np.random.default_rng(seed)
    groups_f, groups_g = defaultdict(list), defaultdict(list)
    for h in hits_f:
        groups_f[signature(h.profile)].append(h)
    for h in hits_g:
        groups_g[signature(h.profile)].append(h)
    ms = {h.profile.m for h in list(hits_f) + list(hits_g)}
    p = next(iter(hits_f)).profile.p
    rep = _new_report(p, ms)
    for sf in sorted(groups_f, key=repr):
        for sg in sorted(groups_g, key=repr):
            Lf, Lg = groups_f[sf], groups_g[sg]
            if not usable_pair(Lf[0].profile, Lg[0].profile):
                continue
            for _ in range(per_signature):
                hf = Lf[rng.integers(len(Lf))]
                hg = Lg[rng.integers(len(Lg))]
                verdicts, k = check_pair(hf, hg, mode)
                if k is not None and k < 2 * hf.profile.m:
                    rep.rank_deficits.append({"f": hf.descriptor, "g": hg.descriptor, "k": k,
                                              "s": hf.profile.s, "t": hg.profile.s,
                                              "ee": hf.profile.epsilon * hg.profile.epsilon})
                for b, ok in verdicts.items():
                    t = rep.tallies[b]
                    t.pairs += 1
                    t.fields.add((p, hf.profile.m))
                    if len(t.examples) < 3:
                        t.examples.append((hf.descriptor, hg.descriptor))
                    if not ok:
                        t.failures += 1
                        rep.failures.append({"branch": b, "f": hf.descriptor, "g": hg.descriptor})
    return rep


def _value_hist(spec, values):
    """H[a, f(x) p + Tr(a x)] = number of x with that value pair."""
    q, p = spec.q, spec.p
    T = spec.trace_product_table.astype(np.int64)
    flat = values[None, :] * p + T + (np.arange(q) * p * p)[:, None]
    return np.bincount(flat.ravel(), minlength=q * p * p).reshape(q, p * p)


def n0_sweep(hits_f, hits_g) -> SurveyReport:
    """Every usable pair: closed-form N0(a, b) against exact convolution for all (a, b)."""
    hits_f, hits_g = list(hits_f), list(hits_g)
    spec = hits_f[0].function.spec
    p = spec.p
    neg = ((-np.arange(p)) % p)
    perm = (neg[:, None] * p + neg[None, :]).ravel()
    HF = [_value_hist(spec, h.function.values) for h in hits_f]
    HG = [_value_hist(spec, h.function.values)[:, perm] for h in hits_g]
    rep = _new_report(p, {spec.m})
    for i, hf in enumerate(hits_f):
        for j, hg in enumerate(hits_g):
            branches = usable_pair(hf.profile, hg.profile)
            if not branches:
                continue
            N0 = HF[i] @ HG[j].T
            N0[0, 0] = 0
            for b in branches:
                t = rep.tallies[b]
                t.pairs += 1
                t.fields.add((p, spec.m))
                if not np.array_equal(n0_table(hf.profile, hg.profile, b), N0):
                    t.failures += 1
                    rep.failures.append({"branch": b, "f": hf.descriptor, "g": hg.descriptor})
    return rep


def family_report(hits) -> dict:
    fams = defaultdict(int)
    for h in hits:
        fams[h.profile.family] += 1
    return {"WRP": fams.get("WRP", 0), WRPB: fams.get(WRPB, 0)}


@dataclass
class HistClass:
    signature: tuple
    members: list
    rows: np.ndarray
    mult: np.ndarray
    values: np.ndarray  # value histogram of f, shared by every row


def hist_classes(hits) -> list[HistClass]:
    """Group hits by (profile signature, multiset of histogram rows)."""
    groups: dict = {}
    for h in hits:
        H = _value_hist(h.function.spec, h.function.values)
        rows, mult = np.unique(H, axis=0, return_counts=True)
        key = (signature(h.profile), rows.tobytes(), mult.tobytes())
        if key not in groups:
            p = h.function.spec.p
            groups[key] = HistClass(key[0], [], rows, mult, H[0].reshape(p, p).sum(axis=1))
        groups[key].members.append(h)
    return sorted(groups.values(), key=lambda c: (repr(c.signature), c.members[0].descriptor))


def class_pair_distribution(cf: HistClass, cg: HistClass, p: int) -> tuple[int, dict[int, int]]:
    """(n, weight multiset over all (a, b)) shared by every pair in cf x cg."""
    neg = (-np.arange(p)) % p
    perm = (neg[:, None] * p + neg[None, :]).ravel()
    n = int(cf.values @ cg.values[neg]) - 1
    N0 = cf.rows @ cg.rows[:, perm].T
    W = (n + 1 - N0).ravel()
    M = (cf.mult[:, None] * cg.mult[None, :]).ravel()
    dist: dict[int, int] = {}
    for w, c in zip(W.tolist(), M.tolist()):
        dist[w] = dist.get(w, 0) + c
    return n, dict(sorted(dist.items()))


def all_pairs(hits_f, hits_g, mode: str = ENUMERATE) -> SurveyReport:
    """Every pair in hits_f x hits_g, one exact check per histogram class pair.

    The class-level distribution is compared with every applicable table, and
    one representative pair per class pair is also built and enumerated in
    ``mode`` to confirm the reduction.
    """
    CF, CG = hist_classes(hits_f), hist_classes(hits_g)
    p = CF[0].members[0].profile.p
    ms = {c.members[0].profile.m for c in CF + CG}
    rep = _new_report(p, ms)
    for cf in CF:
        for cg in CG:
            hf, hg = cf.members[0], cg.members[0]
            branches = usable_pair(hf.profile, hg.profile)
            if not branches:
                continue
            n, dist = class_pair_distribution(cf, cg, p)
            verdicts, k = check_pair(hf, hg, mode)
            D = build_defining_set(hf.function, hg.function)
            enumerated = weight_distribution(D, mode)
            reduction_ok = enumerated.dist == dist and enumerated.n == n
            if not reduction_ok:
                rep.failures.append({"branch": None, "f": hf.descriptor, "g": hg.descriptor,
                                     "what": "class distribution differs from enumeration"})
            size = len(cf.members) * len(cg.members)
            if k is not None and k < 2 * hf.profile.m:
                rep.rank_deficits.append({"f": hf.descriptor, "g": hg.descriptor, "k": k, "pairs": size,
                                          "s": hf.profile.s, "t": hg.profile.s,
                                          "ee": hf.profile.epsilon * hg.profile.epsilon})
            for b in branches:
                pred = predicted_distribution(hf.profile, hg.profile, b)
                ok = pred.dist == dist and pred.n == n and verdicts[b] and reduction_ok
                t = rep.tallies[b]
                t.pairs += size
                t.fields.add((p, hf.profile.m))
                if len(t.examples) < 3:
                    t.examples.append((hf.descriptor, hg.descriptor))
                if not ok:
                    t.failures += size
                    rep.failures.append({"branch": b, "f": hf.descriptor, "g": hg.descriptor})
    return rep
