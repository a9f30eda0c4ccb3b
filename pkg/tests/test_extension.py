import itertools

import numpy as np
import pytest

from centralext import library as lib
from centralext.algebra import direct_product, is_isomorphic
from centralext.cohomology import h2
from centralext.commutator import center
from centralext.congruence import Congruence, cg
from centralext.errors import NotASection, NotCentral, NotIdempotent
from centralext.extension import (CentralExtension, Cocycle, KernelAlgebra, Lifting, basic_construction,
                                  class_of, coboundary_from_witness, derivations, extract_cocycle,
                                  find_splitting, idempotent_ideal_iso, kernel_algebra,
                                  split_sequence_check, stabilizing_automorphism)

from conftest import coset_labels, group_center, group_corpus, normal_subgroups


def element_orders(G, N):
    mul = G.tables["mul"]
    e = int(G.tables["e"])
    out = []
    for x in N:
        k, y = 1, x
        while y != e:
            y = int(mul[y, x])
            k += 1
        out.append(k)
    return sorted(out)


def orders_from_factors(factors):
    if not factors:
        return [1]
    out = []
    for c in itertools.product(*[range(f) for f in factors]):
        o = 1
        for ci, f in zip(c, factors):
            k = f // np.gcd(ci, f)
            o = o * k // np.gcd(o, k)
        out.append(int(o))
    return sorted(out)


def central_cases():
    for name, G in group_corpus().items():
        Z = group_center(G)
        for N in normal_subgroups(G):
            if N <= Z:
                yield name, G, N


CASES = list(central_cases())
CASE_IDS = [f"{name}-N{len(N)}" for name, _, N in CASES]


def table_hom(A, C, psi):
    """Independent check that psi respects every operation table."""
    for f, ar in A.signature.symbols:
        ta, tc = np.asarray(A.tables[f]), np.asarray(C.tables[f])
        for args in itertools.product(range(A.size), repeat=ar):
            if psi[ta[args]] != tc[tuple(psi[a] for a in args)]:
                return False
    return True


@pytest.mark.parametrize("name,G,N", CASES, ids=CASE_IDS)
def test_kernel_algebra_is_the_normal_subgroup(name, G, N, V_groups):
    alpha = Congruence(G, coset_labels(G, N))
    K = kernel_algebra(G, alpha, V_groups)
    assert K.size == len(N)
    assert orders_from_factors(K.invariant_factors) == element_orders(G, N)
    # the diagonal class is the zero
    for a in range(G.size):
        assert class_of(K, a, a) == K.zero


@pytest.mark.parametrize("name,G,N", CASES, ids=CASE_IDS)
def test_round_trip_every_section(name, G, N, V_groups):
    alpha = Congruence(G, coset_labels(G, N))
    ext = CentralExtension.from_congruence(G, alpha, V_groups)
    H = h2(ext.Q, ext.kernel, V_groups)
    classes = set()
    n = 0
    for l in ext.sections():
        T, psi = extract_cocycle(ext, l)
        C, p = basic_construction(ext.kernel, ext.Q, T)
        assert sorted(psi.tolist()) == list(range(G.size))
        assert table_hom(G, C, psi)
        # psi lies over Q
        assert (p.map[psi] == ext.pi.map).all()
        assert H.is_cocycle(T)
        classes.add(H.class_of(T))
        n += 1
    assert n == int(np.prod([len(N)] * (G.size // len(N))))
    # the class does not depend on the section
    assert len(classes) == 1


def test_non_central_rejected(V_groups):
    S3 = lib.symmetric_group(3)
    N = [N for N in normal_subgroups(S3) if len(N) == 3][0]
    with pytest.raises(NotCentral):
        kernel_algebra(S3, Congruence(S3, coset_labels(S3, N)), V_groups)


def test_bad_section_rejected(V_groups):
    Z4 = lib.cyclic_group(4)
    ext = CentralExtension.from_congruence(Z4, cg(Z4, [(0, 2)]), V_groups)
    with pytest.raises(NotASection):
        Lifting(np.array([0, 0]), ext.pi)


def test_zero_cocycle_gives_direct_product(V_groups):
    Z2, Z3 = lib.cyclic_group(2), lib.cyclic_group(3)
    B = KernelAlgebra.from_algebra(Z3, V_groups)
    C, p = basic_construction(B, Z2, Cocycle.zero(Z2, B))
    assert is_isomorphic(C, lib.cyclic_group(6))
    P, _, _ = direct_product(Z3, Z2)
    assert is_isomorphic(C, P)


def test_coboundary_of_homomorphism_vanishes(V_groups):
    Z4, Z2 = lib.cyclic_group(4), lib.cyclic_group(2)
    B = KernelAlgebra.from_algebra(Z2, V_groups)
    for d in derivations(Z4, B):
        assert coboundary_from_witness(d.map, Z4, B).is_zero()
    # a non-additive map gives a nonzero shift
    assert not coboundary_from_witness(np.array([0, 1, 1, 0]), Z4, B).is_zero()


def test_idempotent_ideal_iso_z4_and_d4(V_groups):
    Z4 = lib.cyclic_group(4)
    h, inc = idempotent_ideal_iso(Z4, cg(Z4, [(0, 2)]), 0, V_groups)
    assert sorted(inc.tolist()) == [0, 2]
    assert h.is_injective() and h.is_surjective() and h.is_homomorphism()
    D4 = lib.dihedral_group(4)
    e = int(D4.tables["e"])
    h, inc = idempotent_ideal_iso(D4, center(D4, V_groups), e, V_groups)
    assert set(inc.tolist()) == set(group_center(D4))
    assert h.is_homomorphism() and h.is_injective() and h.is_surjective()


def test_idempotent_required(V_groups):
    Z4 = lib.cyclic_group(4)
    with pytest.raises(NotIdempotent):
        idempotent_ideal_iso(Z4, cg(Z4, [(0, 2)]), 1, V_groups)


def test_split_sequence_on_groups(V_groups):
    # alpha = center of D4 lies inside [1,1], so the image part is trivial
    D4 = lib.dihedral_group(4)
    rep = split_sequence_check(D4, center(D4, V_groups), V_groups, search_split=True)
    assert rep["exact"] and rep["count_ok"]
    assert rep["size_multiplier_part"] == 2 and rep["size_image"] == 1
    assert rep["split_found"]
    # abelian Z4 x Z2 with alpha = everything: [1,1] = 0
    G = group_corpus()["Z4xZ2"]
    rep = split_sequence_check(G, Congruence.one_of(G), V_groups, search_split=True)
    assert rep["exact"] and rep["size_multiplier_part"] == 1 and rep["size_image"] == G.size


def test_find_splitting_none_when_impossible(V_groups):
    # Z2 -> Z4 -> Z2 as kernel algebras in groups: no zero-preserving section of Z4 -> Z2
    Z4, Z2 = lib.cyclic_group(4), lib.cyclic_group(2)
    K = KernelAlgebra.from_algebra(Z4, V_groups)
    K2 = KernelAlgebra.from_algebra(Z2, V_groups)
    assert find_splitting(K, K2, np.array([0, 1, 0, 1])) is None
    K = KernelAlgebra.from_algebra(lib.klein_four(), V_groups)
    assert find_splitting(K, K2, np.array([0, 1, 0, 1])) is not None


def test_stabilizing_automorphism(V_groups):
    Z2 = lib.cyclic_group(2)
    B = KernelAlgebra.from_algebra(Z2, V_groups)
    T = Cocycle.zero(Z2, B)
    for d in derivations(Z2, B):
        gamma, rep = stabilizing_automorphism(B, Z2, T, d, V_groups)
        assert rep["ok"], rep
        assert len(set(gamma.tolist())) == 4
