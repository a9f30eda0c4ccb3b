"""Term condition commutators on small groups, next to the subgroup commutators
they should reproduce, and the center of an expanded group."""
import numpy as np

from centralext import library as lib
from centralext.commutator import center, is_abelian, one, tc_commutator
from centralext.congruence import all_congruences

V = lib.groups_variety()
for G in (lib.symmetric_group(3), lib.dihedral_group(4), lib.quaternion_group()):
    d = tc_commutator(G, one(G), one(G))
    z = center(G, V)
    print(f"{G.name}: [1,1] = {d.text()}   center = {z.text()}   abelian: {is_abelian(G)}")

# extra unary operations shrink the congruence lattice and can change the center
rng = np.random.default_rng(5)
A = lib.random_expanded_group(rng, [lib.dihedral_group(4)])
print(f"{A.name}: {len(all_congruences(A))} congruences, center {center(A, V).text()}")
