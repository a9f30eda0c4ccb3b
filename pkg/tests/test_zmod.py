import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from centralext.zmod import Subquotient, group_order, invariant_factors, kernel_mod, snf_mod


def span(rows, e, n):
    """Brute-force subgroup of (Z/e)^n generated by rows."""
    seen = {tuple([0] * n)}
    frontier = list(seen)
    rows = [tuple(int(x) % e for x in r) for r in rows]
    while frontier:
        nxt = []
        for v in frontier:
            for r in rows:
                w = tuple((a + b) % e for a, b in zip(v, r))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def brute_invariants(group, e, n):
    """Invariant factors of a finite abelian group given as a set of vectors,
    from the counts of elements killed by each divisor."""
    # |G[d]| for every d | e determines the isomorphism type
    counts = {}
    for d in range(1, e + 1):
        if e % d == 0:
            counts[d] = sum(1 for v in group if all((d * x) % e == 0 for x in v))
    return counts


def invariants_counts(factors, e):
    from math import gcd
    out = {}
    for d in range(1, e + 1):
        if e % d == 0:
            c = 1
            for f in factors:
                c *= gcd(d, f)
            out[d] = c
    return out


def test_invariant_factors_examples():
    assert invariant_factors([2, 3]) == [6]
    assert invariant_factors([2, 2]) == [2, 2]
    assert invariant_factors([4, 2, 3]) == [2, 12]
    assert invariant_factors([1, 1]) == []
    assert group_order([2, 12]) == 24


def test_snf_diagonal_and_transforms():
    M = np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    s = snf_mod(M, 12, want_P=True, want_Q=True)
    D = (s.P @ (M % 12) @ s.Q) % 12
    off = D.copy()
    for t, d in enumerate(s.diag):
        assert D[t, t] == d % 12
        off[t, t] = 0
    assert not off.any()
    orders = [12 // g for g in s.orders()]
    # each diagonal gcd divides the next
    gs = s.orders()
    assert all(b % a == 0 for a, b in zip(gs, gs[1:]))
    assert orders


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 6, 8, 9]), st.integers(1, 3), st.integers(0, 3), st.data())
def test_kernel_mod_matches_enumeration(e, q, p, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, e - 1), min_size=q, max_size=q), min_size=p, max_size=p))
    M = np.array(rows, dtype=np.int64).reshape(p, q)
    K = kernel_mod(M, e)
    brute = {v for v in itertools.product(range(e), repeat=q) if not ((M @ np.array(v)) % e).any()}
    assert span(K, e, q) == brute


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 4, 6, 8, 12]), st.integers(1, 3), st.data())
def test_subquotient_matches_enumeration(e, n, data):
    vec = st.lists(st.integers(0, e - 1), min_size=n, max_size=n)
    gens = data.draw(st.lists(vec, min_size=0, max_size=3))
    rels = data.draw(st.lists(vec, min_size=0, max_size=2))
    S = Subquotient(np.array(gens, dtype=np.int64).reshape(-1, n),
                    np.array(rels, dtype=np.int64).reshape(-1, n), e, n)
    big = span(gens + rels, e, n)
    small = span(rels, e, n)
    assert S.order == len(big) // len(small)
    # type of the quotient: count cosets killed by d
    cosets = {}
    for v in big:
        key = min(tuple((a + b) % e for a, b in zip(v, r)) for r in small)
        cosets[key] = v
    for d in (x for x in range(1, e + 1) if e % x == 0):
        killed = sum(1 for v in cosets.values() if tuple((d * a) % e for a in v) in small)
        assert killed == invariants_counts(S.invariant_factors, e)[d]
    # coordinates: members get coords that lift back modulo rels, non-members get None
    for v in itertools.product(range(e), repeat=n):
        c = S.coords(np.array(v))
        if v in big:
            assert c is not None
            back = S.lift(c)
            diff = tuple((a - b) % e for a, b in zip(v, back))
            assert diff in small
            w = S.combination(np.array(v))
            comb = (w @ np.array(gens, dtype=np.int64).reshape(-1, n)) % e if len(gens) else np.zeros(n, int)
            assert tuple((a - b) % e for a, b in zip(v, comb)) in small
        else:
            assert c is None
        assert S.is_trivial(np.array(v)) == (v in small)


def test_subquotient_elements_and_trivial_cases():
    S = Subquotient(np.array([[1, 0], [0, 2]]), np.array([[0, 4]]), 8, 2)
    assert S.order == 8 * 2
    assert len(S.elements()) == S.order
    T = Subquotient(np.zeros((0, 2), np.int64), np.zeros((0, 2), np.int64), 4, 2)
    assert T.order == 1 and T.elements() == [()]
    assert T.coords(np.array([0, 0])) == ()
    assert T.coords(np.array([1, 0])) is None


@pytest.mark.parametrize("factors,e", [([2, 2], 2), ([4], 4), ([2, 4], 4), ([3, 6], 6)])
def test_brute_invariants_helper_consistent(factors, e):
    # diagonal groups: the counting helper agrees with the formula
    n = len(factors)
    gens = [[(e // f) if i == j else 0 for j in range(n)] for i, f in enumerate(factors)]
    G = span(gens, e, n)
    assert brute_invariants(G, e, n) == invariants_counts(factors, e)
