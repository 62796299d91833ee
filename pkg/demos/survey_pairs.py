"""Search a trace template, then check every pair of hits against the tables.

Tr(c1 x^2 + c2 x^6) over F_25 yields 124 weakly regular plateaued functions;
Tr(c1 x^4 + c2 x^8 + c3 x^12) yields functions with dual index 4.  Pairs fall
into a handful of classes because the weight multiset only depends on the
value histograms of f(x) + Tr(ax) over x.  One member pair per class is
enumerated to confirm this.

    python demos/survey_pairs.py
"""
from collections import Counter

from wrpcodes.field import make_field
from wrpcodes.search import SearchSpec, search, signature
from wrpcodes.survey import all_pairs

F = make_field(5, 2)
quad = search(SearchSpec(F, [(2, "all"), (6, "all")], target="WRP"), jobs=2)
idx4 = search(SearchSpec(F, [(4, "all"), (8, "all"), (12, "prime")], target="WRP", constraints={"l": 4}), jobs=2)
print(f"quadratic template: {quad.candidates} candidates, {len(quad.hits)} hits")
print(f"index-4 template:   {idx4.candidates} candidates, {len(idx4.hits)} hits")
print("signatures:", Counter(signature(h.profile) for h in quad.hits + idx4.hits))

rep = all_pairs(quad.hits + idx4.hits, quad.hits)
print("\nbranch                 status       pairs")
for row in rep.rows():
    print(f"{row['branch']:22} {row['status']:12} {row['pairs']:>6}  {row.get('reason', '')}")
print("failures:", rep.failures)
# gamma = 2 with opposite signs: the codewords repeat, so the dimension drops
for d in rep.rank_deficits[:3]:
    print("rank deficit:", d)
