from fractions import Fraction

import numpy as np
import pytest

from wrpcodes.codes import CONVOLVE, ENUMERATE, _convolve_weights, build_defining_set, puncture, weight_distribution
from wrpcodes.codes import CodeReport
from wrpcodes.errors import BadOrbit, UnsupportedIndexPair
from wrpcodes.field import make_field
from wrpcodes.predict import (ALL_BRANCHES, INDICES, PairInvariants, _n0_lut, applicable_branches,
                              distribution_from_character_sums, index_value, invariant_length, invariants,
                              length_formula, minimality_threshold, n0_character_table, n0_class_value,
                              n0_closed_form, n0_table, predicted_distribution, punctured_report,
                              table_distribution)
from wrpcodes.search import SearchSpec, search


def _realizable_grid():
    for p in (5, 13, 17):
        for m in range(2, 6):
            for s in range(m):
                for t in range(m):
                    for ef in (1, -1):
                        for eg in (1, -1):
                            yield PairInvariants(p, m, s, t, ef, eg, False)
                            if (s + t) % 2 == 0 and s and t:
                                yield PairInvariants(p, m, s, t, ef, eg, True)


def _indices_for(p):
    return [i for i in INDICES if not (i == "two-1mod8" and p % 8 != 1) and not (i == "two-5mod8" and p % 8 != 5)]


def test_tables_sum_to_field_square():
    n = 0
    for inv in _realizable_grid():
        for idx in _indices_for(inv.p):
            dist = table_distribution(inv, idx)
            assert sum(dist.values()) == inv.p ** (2 * inv.m), (inv, idx)
            assert all(v > 0 for v in dist.values())
            n += 1
    assert n > 1000


def test_first_moment_of_tables():
    # sum w A_w = n (p - 1) p^(2m-1) whenever every coordinate is a nonzero functional
    for inv in _realizable_grid():
        p, m = inv.p, inv.m
        if inv.balanced or (inv.s + inv.t) % 2:
            n = p ** (2 * m - 1) - 1
        else:
            n = p ** (2 * m - 1) - 1 + Fraction(p - 1, p) * inv.ee * Fraction(p) ** Fraction(inv.tau, 2)
        for idx in _indices_for(p):
            dist = table_distribution(inv, idx)
            assert sum(w * c for w, c in dist.items()) == n * (p - 1) * p ** (2 * m - 1)


def test_branches_for_examples(small_pair, cubic_pair):
    assert applicable_branches(small_pair.pf, small_pair.pg) == ["even/half", "even/two-5mod8"]
    assert applicable_branches(cubic_pair.pf, cubic_pair.pg) == ["odd/half", "odd/two-5mod8"]
    assert invariants(small_pair.pf, small_pair.pg).group == "even"
    assert set(ALL_BRANCHES) >= {"odd/full", "even-balanced/half"}


def test_unsupported_pairs(F25, small_pair, index4_hits_m2):
    g4 = index4_hits_m2[0].profile
    with pytest.raises(UnsupportedIndexPair):
        applicable_branches(small_pair.pf, g4)  # l_g = 4 != (p-1)/2
    with pytest.raises(UnsupportedIndexPair):
        predicted_distribution(small_pair.pf, small_pair.pg, "odd/half")


def test_lengths(small_pair, cubic_pair, quartic_pair):
    assert length_formula(small_pair.pf, small_pair.pg) == 104
    assert length_formula(cubic_pair.pf, cubic_pair.pg) == 3124
    assert length_formula(quartic_pair.pf, quartic_pair.pg) == 65624


def test_n0_closed_form_brute_force(small_pair, cubic_pair):
    for pair in (small_pair, cubic_pair):
        D = build_defining_set(pair.f, pair.g)
        W = _convolve_weights(D)
        N0 = D.n + 1 - W
        N0[0, 0] = 0
        for br in applicable_branches(pair.pf, pair.pg):
            assert np.array_equal(n0_table(pair.pf, pair.pg, br), N0)
        spec = D.spec
        T = spec.trace_product_table
        for a, b in [(1, 0), (0, 1), (3, 7), (spec.q - 1, 5)]:
            direct = 1 + int(np.count_nonzero((T[a, D.xs] + T[b, D.ys]) % spec.p == 0))
            assert n0_closed_form(pair.pf, pair.pg, a, b) == direct


def test_predicted_equals_enumerated(small_pair, cubic_pair):
    for pair in (small_pair, cubic_pair):
        D = build_defining_set(pair.f, pair.g)
        got = weight_distribution(D, ENUMERATE if pair is small_pair else CONVOLVE)
        for br in applicable_branches(pair.pf, pair.pg):
            pred = predicted_distribution(pair.pf, pair.pg, br)
            assert pred.dist == got.dist and pred.n == got.n and pred.k == got.k


def test_punctured_report(small_pair):
    pred = predicted_distribution(small_pair.pf, small_pair.pg)
    pr = punctured_report(pred)
    assert (pr.n, pr.dist) == (26, {0: 1, 20: 520, 25: 104})
    P = puncture(build_defining_set(small_pair.f, small_pair.g))
    assert weight_distribution(P).dist == pr.dist


def test_minimality_threshold_values(small_pair, quartic_pair, cubic_pair):
    # gamma = 4, e_f e_g = -1 -> needs 6
    assert minimality_threshold(quartic_pair.pf, quartic_pair.pg) is False
    assert minimality_threshold(small_pair.pf, small_pair.pg) is False
    # s + t odd, index two-5mod8: no threshold is stated
    assert minimality_threshold(cubic_pair.pf, cubic_pair.pg, "odd/two-5mod8") is None
    assert minimality_threshold(cubic_pair.pf, cubic_pair.pg, "odd/half") is True


def test_threshold_implies_ab_on_tables():
    # where the stated gamma threshold holds, the AB ratio on the table must certify minimality
    for inv in _realizable_grid():
        for idx in _indices_for(inv.p):
            g = inv.group
            if g == "odd":
                need = None if idx == "two-5mod8" else 5
            elif g == "even":
                need = 4 if inv.ee == 1 else 6
            else:
                need = 4
            if need is None or inv.gamma < need:
                continue
            ws = [w for w in table_distribution(inv, idx) if w]
            assert Fraction(min(ws), max(ws)) > Fraction(inv.p - 1, inv.p), (inv, idx)


def _small_grid():
    for inv in _realizable_grid():
        if inv.m <= 3:
            yield inv


def test_character_sum_oracle_matches_brute_force_at_5(quad_hits_m2, index4_hits_m2):
    hits = quad_hits_m2 + index4_hits_m2
    checked = 0
    for hf in hits[::9]:
        for hg in quad_hits_m2[::13]:
            D = build_defining_set(hf.function, hg.function)
            N0 = D.n + 1 - _convolve_weights(D)
            pf, pg = hf.profile, hg.profile
            lut = n0_character_table(invariants(pf, pg), pf.l, pg.l)
            inside = pf.support[:, None] & pg.support[None, :]
            T = lut[np.where(inside, pf.dual[:, None] * 5 + pg.dual[None, :], 25)]
            T[0, 0] = N0[0, 0]
            assert np.array_equal(T, N0)
            checked += 1
    assert checked > 50


def test_character_sum_oracle_matches_brute_force_at_13():
    # quadratics over F_169 have l = 2 on both sides, outside the tables but not outside the oracle
    hits = search(SearchSpec(make_field(13, 2), [(2, "prime-nonzero"), (14, "prime")], target="WRP")).hits
    assert {h.profile.l for h in hits} == {2}
    for hf in hits[:: len(hits) // 3]:
        for hg in hits[5:: len(hits) // 3]:
            D = build_defining_set(hf.function, hg.function)
            N0 = D.n + 1 - _convolve_weights(D)
            pf, pg = hf.profile, hg.profile
            lut = n0_character_table(invariants(pf, pg), 2, 2)
            T = lut[np.where(pf.support[:, None] & pg.support[None, :], pf.dual[:, None] * 13 + pg.dual[None, :], 169)]
            assert np.array_equal(T.ravel()[1:], N0.ravel()[1:])


def test_closed_form_zero_counts_match_character_sums():
    for inv in _small_grid():
        for idx in _indices_for(inv.p):
            assert np.array_equal(_n0_lut(inv, idx), n0_character_table(inv, index_value(inv.p, idx), (inv.p - 1) // 2)), \
                (inv, idx)


def test_tables_match_character_sum_assembly():
    for inv in _small_grid():
        for idx in _indices_for(inv.p):
            assert table_distribution(inv, idx) == distribution_from_character_sums(inv, idx), (inv, idx)


def test_odd_two_1mod8_shift_has_no_p_minus_1_factor():
    # both duals squares: N0 = P - 2 sqrt(p)^(tau-3); scaling the shift by p - 1 would give a negative count
    inv = PairInvariants(17, 2, 0, 1, 1, 1, False)
    assert n0_class_value(inv, "two-1mod8", True, 1, 1) == 289 - 34
    assert n0_class_value(inv, "two-1mod8", True, 3, 3) == 289 + 34
    dist = table_distribution(inv, "two-1mod8")
    assert 16 * 289 + 34 in dist
    assert not {16 * (289 + 34), 16 * (289 - 34)} & set(dist)


def test_puncture_refuses_non_divisible_weights():
    inv = PairInvariants(17, 2, 0, 1, 1, 1, False)
    rep = CodeReport(invariant_length(inv), 4, table_distribution(inv, "two-1mod8"), p=17)
    with pytest.raises(BadOrbit):
        punctured_report(rep)
