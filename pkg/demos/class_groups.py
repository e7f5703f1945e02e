"""Class groups of a few quadratic fields, computed two ways."""

from hilbquad.arith import omega
from hilbquad.classgroup import (
    compose,
    group_structure,
    narrow_group_structure,
    narrow_structure_by_closure,
    reduced_forms,
)

# reduced forms are the classes; composition is the group law
forms = sorted(reduced_forms(-23))
print("reduced forms of discriminant -23:", forms)
print("(2,1,3) * (2,-1,3) =", compose((2, 1, 3), (2, -1, 3)))
print("(2,1,3)^2 =", compose((2, 1, 3), (2, 1, 3)))
print()

print(f"{'d':>16}  {'h':>8}  {'structure':<16} 2-rank  omega-1  3-rank")
for d in (-84, -3299, -4027, -3321607, -987654323, -(10**13 - 1) + 4):
    G = group_structure(d, method="bsgs" if abs(d) > 10**6 else None)
    print(f"{d:>16}  {G.order:>8}  {str(list(G.divisors)):<16} {G.m_rank(2):>6}  {omega(-d) - 1:>7}  {G.m_rank(3):>6}")
print()

# real fields: cycles of reduced indefinite forms against closure of prime forms
for D in (12, 60, 229, 316, 892, 3945):
    a = narrow_group_structure(D)
    b = narrow_structure_by_closure(D)
    print(f"narrow Cl({D}) = {list(a.divisors)}  closure route agrees: {a == b}")
