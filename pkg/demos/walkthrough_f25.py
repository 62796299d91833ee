"""A small code from two quadratic forms over F_25, start to finish.

f(x) = Tr(x^2) and g(y) = Tr(theta y^2 - theta y^6) are both bent, with
opposite signs.
The defining set D collects the pairs (x, y) with f(x) + g(y) = 0, and each
(a, b) gives a codeword (Tr(ax + by))_{(x,y) in D}.  The code has two nonzero
weights and its punctured version reaches the Griesmer bound.

    python demos/walkthrough_f25.py
"""
from wrpcodes.codes import ENUMERATE, minimal_by_cover_scan, build_defining_set, certify_griesmer, dual_distance_at_least_3, puncture, \
    weight_distribution
from wrpcodes.field import make_field
from wrpcodes.plateaued import classify, eval_descriptor
from wrpcodes.predict import applicable_branches, predicted_distribution, punctured_report

F = make_field(5, 2)
print(f"field F_{F.q}, primitive element encoding {F.theta}")

f = eval_descriptor(F, [("t^0", 2)])
g = eval_descriptor(F, [("t^1", 2), ("-t^1", 6)])
pf, pg = classify(f), classify(g)
for name, prof in (("f", pf), ("g", pg)):
    print(f"{name}: s={prof.s} epsilon={prof.epsilon:+d} h={prof.h} l={prof.l} family={prof.family}")

# the Walsh profile decides which closed-form table applies
print("branches:", applicable_branches(pf, pg))

D = build_defining_set(f, g, pf, pg)
full = weight_distribution(D, ENUMERATE)
print(f"\nenumerated {full.params}: {full.enumerator()}")
pred = predicted_distribution(pf, pg)
print(f"predicted  {pred.params}: {pred.enumerator()}  (agrees: {pred.dist == full.dist})")

# (x, y) and (zx, zy) give proportional columns, so keep one per F_5^* orbit
P = puncture(D)
short = weight_distribution(P, ENUMERATE)
print(f"\npunctured  {short.params}: {short.enumerator()}")
print("predicted punctured:", punctured_report(pred).enumerator())
print("projective (dual distance >= 3):", dual_distance_at_least_3(P))
print("Griesmer optimal:", certify_griesmer(short), f"(gap {short.griesmer_gap})")
# d/w_max = 20/25 sits exactly on (p-1)/p, so the weight-ratio test cannot decide
print("minimal by the weight-ratio test:", short.minimal, f"({short.ab_status()})")
print("minimal by scanning supports of all codeword pairs:", minimal_by_cover_scan(P))
