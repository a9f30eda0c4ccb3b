import numpy as np
import pytest

from centralext import library as lib
from centralext.algebra import direct_product


def group_corpus():
    """Small groups used across the suites, keyed by name."""
    gs = [lib.cyclic_group(2), lib.cyclic_group(3), lib.cyclic_group(4), lib.klein_four(),
          lib.cyclic_group(6), lib.symmetric_group(3), lib.cyclic_group(8), lib.dihedral_group(4),
          lib.quaternion_group(), direct_product(lib.cyclic_group(4), lib.cyclic_group(2))[0]]
    return {G.name: G for G in gs}


# --- independent group-theory oracles (plain Python on the multiplication table) ---

def subgroup_closure(G, gens):
    mul = G.tables["mul"]
    e = int(G.tables["e"])
    seen = {e} | {int(g) for g in gens}
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                for c in (int(mul[a, b]), int(mul[b, a])):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
        frontier = new
    return frozenset(seen)


def normal_subgroups(G):
    mul, inv = G.tables["mul"], G.tables["inv"]
    n = G.size
    # every subgroup is reached by adding one element at a time
    allsubs = {subgroup_closure(G, [])}
    frontier = list(allsubs)
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(n):
                if g not in H:
                    K = subgroup_closure(G, list(H) + [g])
                    if K not in allsubs:
                        allsubs.add(K)
                        nxt.append(K)
        frontier = nxt
    subs = {H for H in allsubs if all(int(mul[mul[g, h], inv[g]]) in H for g in range(n) for h in H)}
    return sorted(subs, key=lambda H: (len(H), sorted(H)))


def commutator_subgroup(G, H, K):
    mul, inv = G.tables["mul"], G.tables["inv"]
    comms = {int(mul[mul[h, k], mul[inv[h], inv[k]]]) for h in H for k in K}
    return subgroup_closure(G, comms)


def coset_labels(G, N):
    """Congruence labels of the normal subgroup N: x ~ y iff x^-1 y in N."""
    mul, inv = G.tables["mul"], G.tables["inv"]
    lab = [-1] * G.size
    nxt = 0
    for x in range(G.size):
        if lab[x] < 0:
            for y in range(G.size):
                if int(mul[inv[x], y]) in N:
                    lab[y] = nxt
            nxt += 1
    return np.array(lab)


def group_center(G):
    mul = G.tables["mul"]
    return frozenset(z for z in range(G.size) if all(mul[z, g] == mul[g, z] for g in range(G.size)))


@pytest.fixture(scope="session")
def groups():
    return group_corpus()


@pytest.fixture(scope="session")
def V_groups():
    return lib.groups_variety()


# --- acceptance verdicts, printed once at the end of the run ---

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
