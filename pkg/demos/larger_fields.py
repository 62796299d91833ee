"""The same construction over F_125 and F_625.

Over F_125 the codewords are still cheap to enumerate.  Over F_625 there are
5^8 codewords of length 65624, so the weights are read off per Walsh class:
the weight of (a, b) depends only on (a in Supp f*, b in Supp g*, f*(a),
g*(b)).  A seeded sample of codewords is then enumerated directly and must
agree with the class value.

    python demos/larger_fields.py
"""
import time

from wrpcodes.codes import BY_CLASS, ENUMERATE, build_defining_set, puncture, weight_distribution
from wrpcodes.field import make_field
from wrpcodes.plateaued import classify, eval_descriptor
from wrpcodes.predict import predicted_distribution


def show(F, f_desc, g_desc, mode, **kw):
    f, g = eval_descriptor(F, f_desc), eval_descriptor(F, g_desc)
    pf, pg = classify(f), classify(g)
    t0 = time.perf_counter()
    D = build_defining_set(f, g, pf, pg)
    full = weight_distribution(D, mode, pf, pg, **kw)
    short = weight_distribution(puncture(D), mode, pf, pg, **kw)
    dt = time.perf_counter() - t0
    print(f"F_{F.q}  s={pf.s},{pg.s}  eps={pf.epsilon:+d},{pg.epsilon:+d}  mode {mode}  ({dt:.1f}s)")
    print(f"  full      {full.params}: {full.enumerator()}")
    print(f"  punctured {short.params}: {short.enumerator()}")
    print(f"  table agrees: {predicted_distribution(pf, pg).dist == full.dist}")
    if "spot_checks" in full.checks:
        print(f"  spot checks {full.checks['spot_checks']}, failures {full.checks['spot_check_failures']}")


# the F_125 coefficients are powers of the primitive element 2x (encoding 10)
show(make_field(5, 3, theta=10), [(1, 6), (1, 2)], [("t^1", 6), ("t^3", 2)], ENUMERATE)
show(make_field(5, 4), [(1, 6)], [(1, 26), (-1, 2)], BY_CLASS, seed=0, spot_checks=1000)
