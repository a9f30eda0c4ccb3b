"""Extensions of Z2 by Z2 in the variety of groups.

H^2(Z2, Z2) has two classes. Building B (x)^T Q from a representative of each
gives the two groups of order four, and extracting the cocycle back from each
group and rebuilding gives the same group back."""
from centralext import library as lib
from centralext.algebra import is_isomorphic
from centralext.cohomology import h2
from centralext.extension import CentralExtension, KernelAlgebra, basic_construction, extract_cocycle

V = lib.groups_variety()
Z2 = lib.cyclic_group(2)
B = KernelAlgebra.from_algebra(Z2, V)
H = h2(Z2, B, V)
print(f"H2(Z2, Z2): order {H.order}, invariant factors {H.invariant_factors}")
print(f"  |Z2| = {H.z2.order}, |B2| = {H.b2.order}")

for c in H.elements:
    T = H.representative(c)
    C, pi = basic_construction(B, Z2, T)
    name = "Z4" if is_isomorphic(C, lib.cyclic_group(4)) else "Z2 x Z2"
    ext = CentralExtension(C, Z2, pi, V)
    back, psi = extract_cocycle(ext)
    C2, _ = basic_construction(ext.kernel, Z2, back)
    print(f"class {c}: builds {name}; rebuilt from the extracted cocycle: {is_isomorphic(C2, C)}")
