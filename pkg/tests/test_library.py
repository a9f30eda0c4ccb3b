import numpy as np
import pytest

from centralext import library as lib
from centralext.algebra import direct_product, satisfies_all
from centralext.congruence import all_congruences

from conftest import normal_subgroups


def is_group(G):
    mul, inv, e = G.tables["mul"], G.tables["inv"], int(G.tables["e"])
    n = G.size
    r = range(n)
    return (all(mul[mul[a, b], c] == mul[a, mul[b, c]] for a in r for b in r for c in r)
            and all(mul[e, a] == a == mul[a, e] for a in r)
            and all(mul[a, inv[a]] == e for a in r))


@pytest.mark.parametrize("G", lib.small_groups(), ids=lambda G: G.name)
def test_small_groups_are_groups(G):
    assert is_group(G)
    assert satisfies_all(G, lib.groups_variety().axioms)


def test_named_group_orders():
    assert [lib.symmetric_group(k).size for k in (3, 4)] == [6, 24]
    assert lib.alternating_group(5).size == 60
    assert lib.dihedral_group(4).size == 8 and lib.quaternion_group().size == 8
    # Q8 has a unique involution, D4 has five
    def involutions(G):
        e = int(G.tables["e"])
        return sum(1 for x in range(G.size) if x != e and G.tables["mul"][x, x] == e)
    assert involutions(lib.quaternion_group()) == 1
    assert involutions(lib.dihedral_group(4)) == 5


@pytest.mark.parametrize("G,inside", [
    (lib.symmetric_group(3), True),
    (lib.dihedral_group(6), True),
    (lib.cyclic_group(6), True),
    (direct_product(lib.symmetric_group(3), lib.cyclic_group(3))[0], True),
    (lib.symmetric_group(4), False),
    (lib.dihedral_group(4), False),
    (lib.cyclic_group(4), False),
    (lib.alternating_group(4), False),
])
def test_s3_variety_membership(G, inside):
    assert satisfies_all(G, lib.s3_variety().axioms) == inside


@pytest.mark.parametrize("G,inside", [
    (lib.cyclic_group(4), True), (lib.klein_four(), True), (lib.cyclic_group(2), True),
    (lib.cyclic_group(8), False), (lib.dihedral_group(4), False), (lib.cyclic_group(3), False),
])
def test_abelian_exponent_variety(G, inside):
    assert satisfies_all(G, lib.abelian_exponent_variety(4).axioms) == inside


def test_zn_with_unary():
    V = lib.abelian_groups_with_unary()
    A = lib.zn_with_unary(5, 1)
    assert satisfies_all(A, V.axioms)
    assert list(A.tables["g"]) == [1, 2, 3, 4, 0]


def test_random_expanded_groups_keep_group_congruences():
    rng = np.random.default_rng(3)
    for _ in range(15):
        A = lib.random_expanded_group(rng)
        V = lib.expanded_variety(lib.groups_variety(), [f for f, ar in A.signature.symbols if f.startswith("u")])
        assert satisfies_all(A, V.axioms)
        congs = all_congruences(A)
        assert len(congs) >= 2 or A.size == 1
        # every congruence of the expansion is a group congruence
        group_part = lib.group_from_table(A.tables["mul"])
        n_normal = len(normal_subgroups(group_part))
        assert len(congs) <= n_normal


def test_random_expanded_groups_deterministic():
    a = lib.random_expanded_group(np.random.default_rng(11))
    b = lib.random_expanded_group(np.random.default_rng(11))
    assert a.name == b.name
    assert all(np.array_equal(a.tables[f], b.tables[f]) for f in a.tables)
