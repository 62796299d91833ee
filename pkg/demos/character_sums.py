"""Zero counts from first principles, and where the closed forms needed care.

N0(a, b) counts (x, y) in D with Tr(ax + by) = 0.  Expanding both conditions
with additive characters leaves a double sum over z, y in F_p^* that only
involves the dual values u = f*(a), v = g*(b) and the dual indices.  Each
closed-form branch is checked here against that sum for several primes.

The branch with l_f = 2 and l_g = (p - 1)/2 needs p = 1 mod 8, so p = 17 is
used.  There the inner sum is -(eta(u) + eta(v)) sqrt(p), with no p - 1 factor.
The resulting weights are not multiples of p - 1, and the code cannot be
punctured by scalar orbits.

    python demos/character_sums.py
"""
from wrpcodes.charsums import verify_lemmas
from wrpcodes.predict import PairInvariants, distribution_from_character_sums, index_value, n0_character_sum, \
    n0_class_value, table_distribution

bad = [name for name, ok in verify_lemmas() if not ok]
print("identity checks failing:", bad)

inv = PairInvariants(p=17, m=2, s=1, t=0, eps_f=1, eps_g=1, balanced=False)
lf, lg = index_value(17, "two-1mod8"), index_value(17, "half")
print(f"\np=17 m=2 s=1 t=0: l_f={lf} l_g={lg}")
for u, v in ((1, 1), (1, 3), (3, 3), (0, 1)):
    closed = n0_class_value(inv, "two-1mod8", True, u, v)
    direct = n0_character_sum(inv, lf, lg, True, u, v)
    print(f"  u={u} v={v}: closed form {closed}, character sum {direct}")

tab = table_distribution(inv, "two-1mod8")
print("table == character-sum assembly:", tab == distribution_from_character_sums(inv, "two-1mod8"))
print("weights:", sorted(w for w in tab if w), " multiples of 16:", all(w % 16 == 0 for w in tab))
