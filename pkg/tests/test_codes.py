import numpy as np
import pytest

from wrpcodes.codes import (BY_CLASS, CONVOLVE, ENUMERATE, CodeReport, DefiningSet, build_defining_set,
                            certify_griesmer, certify_minimal, codeword, codeword_weight, dimension, dual_distance,
                            dual_distance_at_least_3, griesmer_sum, minimal_by_cover_scan, puncture, rank_mod_p,
                            weight_distribution)
from wrpcodes.errors import LengthMismatch, ZeroPair
from wrpcodes.field import order_key


def test_defining_set_is_zero_set_of_sum(small_pair):
    D = build_defining_set(small_pair.f, small_pair.g, small_pair.pf, small_pair.pg)
    assert D.n == 104
    f, g = small_pair.f.values, small_pair.g.values
    assert np.all((f[D.xs] + g[D.ys]) % 5 == 0)
    assert (0, 0) not in set(D.pairs())
    keys = list(zip(order_key(D.spec, D.xs).tolist(), order_key(D.spec, D.ys).tolist()))
    assert keys == sorted(keys)


def test_length_mismatch_is_raised(small_pair, cubic_pair):
    # feed the profile of a different function: the length check must notice
    with pytest.raises(LengthMismatch):
        build_defining_set(small_pair.f, small_pair.g, small_pair.pf,
                           type(small_pair.pg)(**{**small_pair.pg.__dict__, "epsilon": -1}))


def test_codeword_weight_and_zero_pair(small_pair):
    D = build_defining_set(small_pair.f, small_pair.g)
    with pytest.raises(ZeroPair):
        codeword_weight(D, 0, 0)
    c = codeword(D, 3, 7)
    assert codeword_weight(D, 3, 7) == int(np.count_nonzero(c))


@pytest.mark.parametrize("mode", [ENUMERATE, CONVOLVE, BY_CLASS])
def test_modes_agree_small(small_pair, mode):
    D = build_defining_set(small_pair.f, small_pair.g)
    rep = weight_distribution(D, mode, small_pair.pf, small_pair.pg, spot_checks=200)
    assert rep.dist == {0: 1, 80: 520, 100: 104}
    assert rep.k == 4 and rep.n == 104
    assert rep.checks["first_moment"]
    if mode == BY_CLASS:
        assert rep.checks["spot_check_failures"] == 0 and rep.checks["class_sizes"]


def test_puncture_orbits(small_pair):
    D = build_defining_set(small_pair.f, small_pair.g)
    P = puncture(D)
    assert P.n == 26
    spec = D.spec
    # each representative's orbit has p - 1 distinct members, and orbits are disjoint
    seen = set()
    for x, y in P.reps:
        orb = {(int(spec.mul(z, x)), int(spec.mul(z, y))) for z in range(1, 5)}
        assert len(orb) == 4 and not (orb & seen)
        seen |= orb
    assert seen == set(D.pairs())


def test_dual_distance(small_pair):
    D = build_defining_set(small_pair.f, small_pair.g)
    assert dual_distance(D) == 2 and not dual_distance_at_least_3(D)
    assert dual_distance_at_least_3(puncture(D))
    # a set holding (x, y) and (2x, 2y)
    spec = D.spec
    tiny = DefiningSet(spec, np.array([1, int(spec.mul(2, 1))]), np.array([3, int(spec.mul(2, 3))]))
    assert not dual_distance_at_least_3(tiny)


def test_rank_mod_p():
    M = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank_mod_p(M, 5) == 2
    assert rank_mod_p(np.eye(4, dtype=int), 5) == 4


def test_griesmer():
    assert griesmer_sum(4, 20, 5) == 26
    assert griesmer_sum(4, 80, 5) == 101
    assert certify_griesmer(CodeReport(26, 4, {0: 1, 20: 520, 25: 104}))
    assert not certify_griesmer(CodeReport(104, 4, {0: 1, 80: 520, 100: 104}))
    assert certify_griesmer(CodeReport(1, 1, {0: 1, 1: 4}))


def test_ab_condition_is_exact():
    r = CodeReport(104, 4, {0: 1, 80: 520, 100: 104})
    assert not certify_minimal(r) and r.ab_status() == "inconclusive"
    assert certify_minimal(CodeReport(10, 2, {0: 1, 9: 10, 10: 14}))
    assert CodeReport(10, 2, {0: 1, 5: 10, 10: 14}).ab_status() == "not certified"


def test_cover_scan_agrees_when_ab_holds(quad_hits_m2):
    # whenever the sufficient condition says minimal, the exhaustive scan must agree
    checked = 0
    for hf in quad_hits_m2[::17]:
        for hg in quad_hits_m2[::29]:
            D = build_defining_set(hf.function, hg.function)
            P = puncture(D)
            rep = weight_distribution(P, CONVOLVE)
            if certify_minimal(rep):
                assert minimal_by_cover_scan(P)
                checked += 1
    assert checked > 0


def test_cover_scan_detects_non_minimal(F25):
    # two coordinates (1, 0) and (theta, 0): Tr(a) and Tr(theta a) only, plenty of covering pairs
    S = DefiningSet(F25, np.array([1, 6, 11]), np.array([0, 0, 0]))
    assert not minimal_by_cover_scan(S)


def test_dimension_of_example(small_pair):
    D = build_defining_set(small_pair.f, small_pair.g)
    assert dimension(D) == 4
