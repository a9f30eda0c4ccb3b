import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from centralext.congruence import (Congruence, Partition, UnionFind, all_congruences, cg, join,
                                   meet, parse_partition, principal_congruences)
from centralext.errors import CarrierMismatch, IncompatiblePartition, ParseError
from centralext.library import cyclic_group, dihedral_group, quaternion_group, semilattice2, symmetric_group

from conftest import coset_labels, group_corpus, normal_subgroups


def test_union_find():
    uf = UnionFind(5)
    assert uf.union(0, 3) and uf.union(3, 4) and not uf.union(0, 4)
    assert uf.find(4) == uf.find(0) != uf.find(1)


def test_partition_text_roundtrip():
    p = parse_partition("0,2|1,3", 4)
    assert p.text() == "0,2|1,3"
    assert parse_partition("full", 3).is_one() and parse_partition("zero", 3).is_zero()
    with pytest.raises(ParseError):
        parse_partition("0,7", 4)
    with pytest.raises(ParseError):
        parse_partition("0,a", 4)


def test_partition_order():
    a = parse_partition("0,2|1|3", 4)
    b = parse_partition("0,2|1,3", 4)
    assert a <= b and not b <= a


def test_cg_in_z4():
    Z4 = cyclic_group(4)
    assert cg(Z4, [(0, 2)]).text() == "0,2|1,3"
    assert cg(Z4, [(0, 1)]).is_one()


def test_incompatible_partition_rejected():
    Z4 = cyclic_group(4)
    with pytest.raises(IncompatiblePartition):
        Congruence.from_partition(Z4, parse_partition("0,1|2,3", 4))
    with pytest.raises(CarrierMismatch):
        Congruence(Z4, np.zeros(3, dtype=int))


@pytest.mark.parametrize("name", ["Z4", "V4", "S3", "D4", "Q8", "Z4xZ2", "Z6"])
def test_group_congruences_are_normal_subgroups(name):
    # oracle: congruences of a group correspond to normal subgroups
    G = group_corpus()[name]
    got = sorted(c.text() for c in all_congruences(G))
    want = sorted(Partition(coset_labels(G, N)).text() for N in normal_subgroups(G))
    assert got == want


def test_semilattice_congruences():
    # the 2-element semilattice has only the trivial congruences
    assert len(all_congruences(semilattice2())) == 2


def test_principal_congruences_subset():
    D4 = dihedral_group(4)
    keys = {c.key() for c in all_congruences(D4)}
    assert all(c.key() in keys for c in principal_congruences(D4))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S3", "D4", "Q8", "Z4xZ2"]), st.data())
def test_lattice_laws(name, data):
    G = group_corpus()[name]
    congs = all_congruences(G)
    a, b, c = (data.draw(st.sampled_from(congs)) for _ in range(3))
    assert join(a, b) == join(b, a) and meet(a, b) == meet(b, a)
    assert meet(a, join(a, b)) == a and join(a, meet(a, b)) == a
    assert meet(a, b) <= a <= join(a, b)
    assert join(join(a, b), c) == join(a, join(b, c))
    # groups are congruence modular
    if a <= c:
        assert join(a, meet(b, c)) == meet(join(a, b), c)
