"""Schur multiplier and cover of Z2 x Z2, presented inside the free algebra on
two generators of the variety generated by D4 (32 elements)."""
from centralext import library as lib
from centralext.algebra import is_isomorphic, presentation_of
from centralext.extension import KernelAlgebra
from centralext.schur import cover_construct, schur_hopf_check, schur_multiplier

V = lib.groups_variety()
Q = lib.klein_four()
p = presentation_of(Q, lib.dihedral_group(4), 2)
sm = schur_multiplier(p, V)
print(f"free algebra: {p.F.size} elements, F/[theta,1]: {sm.F_prime.size} elements")
print(f"multiplier: order {sm.order}, factors {sm.invariant_factors}")

cov = cover_construct(p, V)
print(f"cover: {cov.algebra.size} elements, is D4: {is_isomorphic(cov.algebra, lib.dihedral_group(4))}")
print(f"certificates: {cov.certificates}")

E = KernelAlgebra.from_algebra(lib.cyclic_group(2), V)
r = schur_hopf_check(Q, E, p, V)
print(f"im delta {r['im_delta_factors']}  Hom(M, E) {r['hom_M_E_factors']}  H2(Q, E) order {r['h2_order']}")
