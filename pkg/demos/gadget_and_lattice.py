"""Local conditions from Moebius gadgets, and positive lattice bases."""

import random
from fractions import Fraction

from hilbquad.lattice import Lattice2, minimal_basis, positivize
from hilbquad.localize import PlaceSet, abs_at, build_gadget, pullback

for places, eps in (("inf", "1/10"), ("inf,2", "1/10"), ("inf,2,3", "1/100"), ("5", "1/100")):
    g = build_gadget(PlaceSet.parse(places), Fraction(eps))
    print(f"S={{{places}}} eps={eps}: a = {g.A}, b = {g.B} (mod {g.M})")
    for a, b in ((g.A + g.M, g.B + 2 * g.M), (g.A + 5 * g.M, g.B + 3 * g.M)):
        t = pullback(g, a, b)
        sizes = ", ".join(f"|t|_{v} = {float(abs_at(t, v)):.2e}" for v in g.S)
        print(f"   (a, b) = ({a}, {b}) -> t = {t}   {sizes}")
print()

rng = random.Random(1)
for _ in range(5):
    g0 = (rng.randint(-100, 100), rng.randint(-100, 100))
    g1 = (rng.randint(-100, 100), rng.randint(-100, 100))
    B = minimal_basis(Lattice2(g0, g1))
    P = positivize(B)
    print(f"generators {g0}, {g1}: minimal {B.v0}, {B.v1}  positive {P.v0}, {P.v1}  "
          f"max entry {max(P.entries())} <= 3*{B.M}")
