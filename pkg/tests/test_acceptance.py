"""Acceptance criteria, one per test.  Each prints a PASS/FAIL line; the
assertion uses the same exact comparison, with no tolerance anywhere."""
import time
from collections import defaultdict

import numpy as np
import pytest

from wrpcodes.charsums import verify_lemmas
from wrpcodes.codes import (BY_CLASS, ENUMERATE, build_defining_set, certify_griesmer, dual_distance,
                            dual_distance_at_least_3, puncture, weight_distribution)
from wrpcodes.errors import BadOrbit
from wrpcodes.field import make_field
from wrpcodes.plateaued import (SPECIAL_KINDS, WRP, WRPB, bsq_formula, count_bsq, count_dual_level,
                                count_dual_level_formula, count_joint, count_joint_formula, count_special,
                                count_special_formula, dual_histogram, walsh_transform)
from wrpcodes.predict import (INDICES, PairInvariants, predicted_distribution, punctured_report,
                              table_distribution)
from wrpcodes.search import SearchSpec, search, signature
from wrpcodes.survey import EXERCISED, FAILED, UNEXERCISED, all_pairs, n0_sweep, usable_pair


def verdict(capsys, name, ok, detail=""):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, detail


def _timed_search(spec, slots, **kw):
    t0 = time.perf_counter()
    res = search(SearchSpec(spec, slots, **kw), jobs=4)
    return res, time.perf_counter() - t0


@pytest.fixture(scope="module")
def searches_m2():
    F = make_field(5, 2)
    quad = _timed_search(F, [(2, "all"), (6, "all")])
    idx4 = _timed_search(F, [(4, "all"), (8, "all"), (12, "prime")])
    return quad, idx4


@pytest.fixture(scope="module")
def search_m3():
    return _timed_search(make_field(5, 3), [(2, "all"), (6, "all")])


def _enumerator(dist):
    return " + ".join(f"{c}z^{w}" if w else str(c) for w, c in sorted(dist.items()))


# -- golden examples ---------------------------------------------------------

def test_example_f25_golden(capsys, small_pair):
    t0 = time.perf_counter()
    D = build_defining_set(small_pair.f, small_pair.g, small_pair.pf, small_pair.pg)
    full = weight_distribution(D, ENUMERATE)
    P = puncture(D)
    punct = weight_distribution(P, ENUMERATE)
    griesmer = certify_griesmer(punct)
    dt = time.perf_counter() - t0
    ok = (full.params == "[104,4,80]" and full.dist == {0: 1, 80: 520, 100: 104}
          and punct.params == "[26,4,20]" and punct.dist == {0: 1, 20: 520, 25: 104} and griesmer and dt < 1)
    verdict(capsys, "F_25 golden code", ok,
            f"{full.params} {_enumerator(full.dist)}; punctured {punct.params} {_enumerator(punct.dist)}; "
            f"griesmer optimal {griesmer}; {dt:.2f}s")


def test_example_f125_golden(capsys, cubic_pair):
    t0 = time.perf_counter()
    D = build_defining_set(cubic_pair.f, cubic_pair.g, cubic_pair.pf, cubic_pair.pg)
    full = weight_distribution(D, ENUMERATE)
    punct = weight_distribution(puncture(D), ENUMERATE)
    dt = time.perf_counter() - t0
    ok = (full.params == "[3124,6,2400]" and full.dist == {0: 1, 2400: 1300, 2500: 13124, 2600: 1200}
          and punct.params == "[781,6,600]" and dt < 30)
    verdict(capsys, "F_125 golden code", ok,
            f"{full.params} {_enumerator(full.dist)}; punctured {punct.params}; {dt:.2f}s")


def test_example_f625_golden(capsys, quartic_pair):
    t0 = time.perf_counter()
    D = build_defining_set(quartic_pair.f, quartic_pair.g, quartic_pair.pf, quartic_pair.pg)
    full = weight_distribution(D, BY_CLASS, quartic_pair.pf, quartic_pair.pg, seed=0, spot_checks=1000)
    punct = weight_distribution(puncture(D), BY_CLASS, quartic_pair.pf, quartic_pair.pg, seed=0)
    dt = time.perf_counter() - t0
    ok = (full.params == "[65624,8,50000]" and full.dist == {0: 1, 50000: 520, 52500: 390000, 62500: 104}
          and full.checks["spot_checks"] == 1000 and full.checks["spot_check_failures"] == 0
          and full.checks["class_sizes"] and punct.params == "[16406,8,12500]" and dt < 300)
    verdict(capsys, "F_625 golden code", ok,
            f"{full.params} {_enumerator(full.dist)}; spot-check failures "
            f"{full.checks['spot_check_failures']}/1000; punctured {punct.params}; {dt:.2f}s")


# -- character sums and counts ------------------------------------------------

REQUIRED_IDENTITIES = ["gauss closed form", "quadratic exponential sum closed form F_5", "I_1(a) = 0",
                       "I_2(a) = -1", "I_4 = I_2 + H_2", "companion sum via Jacobi sums p=13 d=4",
                       "eta pair sum SQ p=5", "eta pair sum SQ p=13", "eta pair sum SQ p=17 = -16",
                       "eta pair sum SQ p=29"]


def test_character_sum_identities(capsys):
    t0 = time.perf_counter()
    lines = verify_lemmas()
    dt = time.perf_counter() - t0
    failed = [n for n, ok in lines if not ok]
    missing = [r for r in REQUIRED_IDENTITIES if not any(r in n for n, _ in lines)]
    ok = not failed and not missing and dt < 10
    verdict(capsys, "character-sum identities", ok,
            f"{len(lines)} identities, failed {failed}, missing {missing}; {dt:.2f}s")


def _dual_classes(hits):
    groups = {}
    for h in hits:
        key = (signature(h.profile), dual_histogram(h.profile).tobytes())
        groups.setdefault(key, []).append(h)
    return list(groups.values())


def _literal_counts(pf, pg, p):
    A = pf.dual[pf.support][:, None]
    B = pg.dual[pg.support][None, :]
    S = (A + B) % p
    return [int(np.count_nonzero(S == c)) for c in range(p)]


def test_counting_identities(capsys, searches_m2, search_m3):
    t0 = time.perf_counter()
    (quad, _), (idx4, _) = searches_m2
    res3, _ = search_m3
    bad = []
    pairs = checks = 0
    for hits in (quad.hits + idx4.hits, res3.hits):
        p = hits[0].profile.p
        for h in hits:
            for c in range(p):
                checks += 1
                if count_dual_level(h.profile, c) != count_dual_level_formula(h.profile, c):
                    bad.append(("N", h.descriptor, c))
        # every pair count reads only the two dual histograms, so one member per class settles the class
        classes = _dual_classes(hits)
        for cf in classes:
            for cg in classes:
                pf, pg = cf[0].profile, cg[0].profile
                pairs += len(cf) * len(cg)
                if _literal_counts(pf, pg, p) != [count_joint(pf, pg, c) for c in range(p)]:
                    bad.append(("literal", cf[0].descriptor, cg[0].descriptor))
                for c in range(p):
                    checks += 1
                    if count_joint(pf, pg, c) != count_joint_formula(pf, pg, c):
                        bad.append(("T", cf[0].descriptor, cg[0].descriptor, c))
                if (pf.s + pg.s) % 2:
                    for w in ("SQ", "NSQ"):
                        checks += 1
                        if count_bsq(pf, pg, w) != bsq_formula(p, pf.m, pf.s, pg.s, pf.epsilon, pg.epsilon, w):
                            bad.append(("B", w, cf[0].descriptor, cg[0].descriptor))
                for kind in SPECIAL_KINDS:
                    checks += 1
                    if count_special(pf, pg, kind) != count_special_formula(pf, pg, kind):
                        bad.append((kind, cf[0].descriptor, cg[0].descriptor))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    verdict(capsys, "counting identities", ok,
            f"{pairs} pairs at m in {{2,3}}, {checks} class-level checks, {len(bad)} failures; {dt:.2f}s")


# -- tables against enumeration ----------------------------------------------

def test_tables_agree_with_enumeration(capsys, searches_m2, search_m3):
    (quad, tq), (idx4, ti) = searches_m2
    res3, t3 = search_m3
    t0 = time.perf_counter()
    g2 = [h for h in quad.hits if h.profile.l == 2]
    rep = all_pairs(quad.hits + idx4.hits, g2).merge(all_pairs(res3.hits, res3.hits))
    dt = time.perf_counter() - t0 + tq + ti + t3
    rows = rep.rows()
    wrpb = sum(h.profile.family == WRPB for h in quad.hits + idx4.hits + res3.hits)
    failed = [r["branch"] for r in rows if r["status"] == FAILED]
    silent = [r["branch"] for r in rows if r["status"] == UNEXERCISED and not r.get("reason")]
    exercised = [r["branch"] for r in rows if r["status"] == EXERCISED]
    # every branch is accounted for: either checked against real pairs or listed with a reason
    ok = (not failed and not silent and not rep.failures and len(rows) == 12 and exercised
          and all(r["status"] in (EXERCISED, UNEXERCISED) for r in rows) and dt < 600)
    with capsys.disabled():
        print(f"\n  WRPB specimens found at p=5, m in {{2,3}}: {wrpb}")
        for r in rows:
            print(f"  {r['branch']:<24} {r['status']:<12} pairs={r['pairs']}"
                  + (f" ({r['reason']})" if r["status"] == UNEXERCISED else ""))
        for d in rep.rank_deficits:
            print(f"  dimension {d['k']} < 2m on {d['pairs']} pairs with s={d['s']}, t={d['t']}, "
                  f"eps_f eps_g={d['ee']} (weight multiset still matches)")
    verdict(capsys, "tables agree with enumeration", ok,
            f"{len(exercised)} branches exercised, {12 - len(exercised)} UNEXERCISED, failed {failed}; {dt:.1f}s")


def test_zero_counts_agree_with_convolution(capsys, searches_m2):
    (quad, _), (idx4, _) = searches_m2
    t0 = time.perf_counter()
    g2 = [h for h in quad.hits if h.profile.l == 2]
    rep = n0_sweep(quad.hits + idx4.hits, g2)
    dt = time.perf_counter() - t0
    pairs = sum(1 for hf in quad.hits + idx4.hits for hg in g2 if usable_pair(hf.profile, hg.profile))
    ok = not rep.failures and pairs > 0 and dt < 60
    verdict(capsys, "zero counts agree with convolution", ok,
            f"{pairs} pairs x 624 codewords, {len(rep.failures)} failing pairs; {dt:.2f}s")


# -- structure ----------------------------------------------------------------

def test_structural_properties(capsys, searches_m2, search_m3, small_pair, cubic_pair, quartic_pair):
    (quad, _), (idx4, _) = searches_m2
    res3, _ = search_m3
    problems = defaultdict(int)
    spectra = 0
    for h in quad.hits + idx4.hits + res3.hits:
        spectra += 1
        if not walsh_transform(h.function).parseval_holds():
            problems["parseval"] += 1
    for pair in (small_pair, cubic_pair, quartic_pair):
        spectra += 2
        for fn in (pair.f, pair.g):
            if not walsh_transform(fn).parseval_holds():
                problems["parseval"] += 1

    tables = 0
    for p in (5, 13, 17, 29):
        for m in range(2, 5):
            for s in range(m):
                for t in range(m):
                    for ef in (1, -1):
                        for eg in (1, -1):
                            for bal in (False, True):
                                if bal and ((s + t) % 2 or not (s and t)):
                                    continue
                                inv = PairInvariants(p, m, s, t, ef, eg, bal)
                                for idx in INDICES:
                                    if idx == "two-1mod8" and p % 8 != 1 or idx == "two-5mod8" and p % 8 != 5:
                                        continue
                                    tables += 1
                                    if sum(table_distribution(inv, idx).values()) != p ** (2 * m):
                                        problems["table sum"] += 1

    # puncturing: on example pairs and one pair per signature combination
    reps = {}
    for h in quad.hits + idx4.hits:
        reps.setdefault(signature(h.profile), h)
    g_reps = [h for h in reps.values() if h.profile.l == 2]
    sets = [(pr.f, pr.g, pr.pf, pr.pg) for pr in (small_pair, cubic_pair)]
    sets += [(hf.function, hg.function, hf.profile, hg.profile) for hf in reps.values() for hg in g_reps]
    punctured = refused = 0
    for f, g, pf, pg in sets:
        D = build_defining_set(f, g, pf, pg)
        if dual_distance(D) != 2:
            problems["full dual distance"] += 1
        if (pf.h - pg.h) % 4:
            # f(z x) + g(z y) = z^h_f f(x) + z^h_g g(y): scalar orbits leave D, so there is nothing to puncture
            try:
                puncture(D)
                problems["orbit-breaking pair punctured"] += 1
            except BadOrbit:
                refused += 1
            continue
        P = puncture(D)
        punctured += 1
        full = weight_distribution(D, ENUMERATE)
        pr = weight_distribution(P, ENUMERATE)
        if {w // 4: c for w, c in full.dist.items()} != pr.dist or any(w % 4 for w in full.dist) or P.n * 4 != D.n:
            problems["puncture division"] += 1
        if usable_pair(pf, pg) and punctured_report(predicted_distribution(pf, pg)).dist != pr.dist:
            problems["punctured table"] += 1
        if not dual_distance_at_least_3(P):
            problems["punctured projective"] += 1
    ok = not problems and punctured > 0
    verdict(capsys, "structural properties", ok,
            f"{spectra} spectra, {tables} tables, {punctured} punctured sets, {refused} pairs with "
            f"h_f != h_g refused; problems {dict(problems)}")
