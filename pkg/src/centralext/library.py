"""Small standard algebras and varieties used by examples, tests and repro runs."""
from __future__ import annotations

import dataclasses
import itertools

import numpy as np

from .algebra import FiniteAlgebra, direct_product
from .termlang import Signature, VarietySpec, parse_identity, parse_signature, parse_term

GROUP_SIG = parse_signature("mul/2, inv/1, e/0")
ABELIAN_G_SIG = parse_signature("add/2, neg/1, zero/0, g/1")

_GROUP_AXIOMS = [
    "mul(mul(x,y),z) = mul(x,mul(y,z))",
    "mul(e,x) = x",
    "mul(x,e) = x",
    "mul(inv(x),x) = e",
    "mul(x,inv(x)) = e",
]


def groups_variety(extra_axioms=()) -> VarietySpec:
    axioms = tuple(parse_identity(a, GROUP_SIG) for a in list(_GROUP_AXIOMS) + list(extra_axioms))
    m = parse_term("mul(mul(x,inv(y)),z)", GROUP_SIG)
    return VarietySpec(GROUP_SIG, axioms, m, ("x", "y", "z"), name="groups")


def abelian_groups_with_unary() -> VarietySpec:
    """Abelian groups with one extra, unconstrained unary operation g."""
    sig = ABELIAN_G_SIG
    axioms = [
        "add(add(x,y),z) = add(x,add(y,z))",
        "add(x,y) = add(y,x)",
        "add(zero,x) = x",
        "add(neg(x),x) = zero",
    ]
    m = parse_term("add(add(x,neg(y)),z)", sig)
    return VarietySpec(sig, tuple(parse_identity(a, sig) for a in axioms), m, ("x", "y", "z"),
                       name="abelian groups with a unary operation")


def group_from_table(mul, name="", labels=None) -> FiniteAlgebra:
    mul = np.asarray(mul, dtype=np.int64)
    n = mul.shape[0]
    ids = [e for e in range(n) if (mul[e] == np.arange(n)).all() and (mul[:, e] == np.arange(n)).all()]
    if len(ids) != 1:
        raise ValueError("table has no identity")
    e = ids[0]
    inv = np.array([int(np.nonzero(mul[x] == e)[0][0]) for x in range(n)])
    return FiniteAlgebra(GROUP_SIG, n, {"mul": mul, "inv": inv, "e": np.array(e)}, labels, name)


def permutation_group(gens, name="") -> FiniteAlgebra:
    """Group generated by permutations (tuples); elements sorted lexicographically,
    so the identity is element 0.  Product is composition: (p*q)(i) = p[q[i]]."""
    deg = len(gens[0])
    ident = tuple(range(deg))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(deg))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = sorted(seen)
    index = {p: i for i, p in enumerate(elems)}
    n = len(elems)
    mul = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            mul[i, j] = index[tuple(p[q[t]] for t in range(deg))]
    labels = ["".join(map(str, p)) for p in elems]
    return group_from_table(mul, name, labels)


def cyclic_group(n) -> FiniteAlgebra:
    x = np.arange(n)
    return group_from_table((x[:, None] + x[None, :]) % n, f"Z{n}")


def klein_four() -> FiniteAlgebra:
    V, _, _ = direct_product(cyclic_group(2), cyclic_group(2))
    V.name = "V4"
    return V


def symmetric_group(k) -> FiniteAlgebra:
    if k == 1:
        return cyclic_group(1)
    gens = [tuple([1, 0] + list(range(2, k)))]
    if k > 2:
        gens.append(tuple(list(range(1, k)) + [0]))
    return permutation_group(gens, f"S{k}")


def alternating_group(k) -> FiniteAlgebra:
    gens = []
    for i in range(k - 2):
        p = list(range(k))
        p[i], p[i + 1], p[i + 2] = p[i + 1], p[i + 2], p[i]
        gens.append(tuple(p))
    return permutation_group(gens, f"A{k}")


def dihedral_group(k) -> FiniteAlgebra:
    """Symmetries of a k-gon (order 2k)."""
    r = tuple((i + 1) % k for i in range(k))
    s = tuple((-i) % k for i in range(k))
    return permutation_group([r, s], f"D{k}")


def quaternion_group() -> FiniteAlgebra:
    # elements (sign, unit) with unit in 1,i,j,k -> index 4*s + u
    units = {(0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
             (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
             (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
             (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0)}
    mul = np.empty((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            sa, ua = divmod(a, 4)
            sb, ub = divmod(b, 4)
            sg, u = units[(ua, ub)]
            mul[a, b] = 4 * ((sa + sb + sg) % 2) + u
    labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    return group_from_table(mul, "Q8", labels)


def expand_group(G: FiniteAlgebra, unary: dict, name="") -> FiniteAlgebra:
    """Add unary operations (name -> table) to a group."""
    sig = Signature(G.signature.symbols + tuple((f, 1) for f in unary))
    tables = dict(G.tables)
    tables.update({f: np.asarray(t) for f, t in unary.items()})
    return FiniteAlgebra(sig, G.size, tables, G.labels, name or G.name + "+")


def expanded_variety(V: VarietySpec, unary_names) -> VarietySpec:
    sig = Signature(V.signature.symbols + tuple((f, 1) for f in unary_names))
    return VarietySpec(sig, V.axioms, V.difference_term, V.diff_vars, name=V.name + " (expanded)")


def zn_with_unary(n, shift) -> FiniteAlgebra:
    """<Z_n, +, -, 0, g> with g(x) = x + shift."""
    x = np.arange(n)
    tables = {"add": (x[:, None] + x[None, :]) % n, "neg": (-x) % n, "zero": np.array(0),
              "g": (x + shift) % n}
    return FiniteAlgebra(ABELIAN_G_SIG, n, tables, name=f"Z{n}[g=x+{shift}]" if shift else f"Z{n}[g=id]")


def semilattice2() -> FiniteAlgebra:
    sig = parse_signature("meet/2")
    return FiniteAlgebra(sig, 2, {"meet": np.array([[0, 0], [0, 1]])}, name="SL2")


def abelian_exponent_variety(n) -> VarietySpec:
    """Abelian groups of exponent dividing n, as groups with two more laws."""
    xn = "x"
    for _ in range(n - 1):
        xn = f"mul({xn},x)"
    V = groups_variety(["mul(x,y) = mul(y,x)", f"{xn} = e"])
    return dataclasses.replace(V, name=f"abelian groups of exponent {n}")


def s3_variety() -> VarietySpec:
    """The variety generated by S3: exponent 6 with commuting squares."""
    x6 = "mul(mul(mul(x,x),mul(x,x)),mul(x,x))"
    V = groups_variety([f"{x6} = e", "mul(mul(x,x),mul(y,y)) = mul(mul(y,y),mul(x,x))"])
    return dataclasses.replace(V, name="HSP(S3)")


def small_groups() -> list:
    """Groups of order at most 8 (one per isomorphism type) plus A4 and S3 x Z2."""
    return [cyclic_group(2), cyclic_group(3), cyclic_group(4), klein_four(), cyclic_group(5),
            cyclic_group(6), symmetric_group(3), cyclic_group(7), cyclic_group(8),
            direct_product(cyclic_group(4), cyclic_group(2))[0], direct_product(klein_four(), cyclic_group(2))[0],
            dihedral_group(4), quaternion_group(), alternating_group(4),
            direct_product(symmetric_group(3), cyclic_group(2))[0]]


def random_expanded_group(rng: np.random.Generator, groups=None, max_unary=2) -> FiniteAlgebra:
    """A small group with 1..max_unary extra unary operations.

    Each operation is a power map, an inner automorphism, or a random map
    sending cosets of a random normal subgroup to cosets; all three keep
    some congruences alive, the first two keep all of them."""
    from .congruence import all_congruences
    groups = groups or small_groups()
    G = groups[int(rng.integers(len(groups)))]
    mul, inv = np.asarray(G.tables["mul"]), np.asarray(G.tables["inv"])
    congs = all_congruences(G)
    unary = {}
    for i in range(int(rng.integers(1, max_unary + 1))):
        kind = int(rng.integers(3))
        if kind == 0:
            f = np.arange(G.size)
            for _ in range(int(rng.integers(2, 6)) - 1):
                f = mul[f, np.arange(G.size)]
        elif kind == 1:
            g = int(rng.integers(G.size))
            f = mul[mul[g, np.arange(G.size)], inv[g]]
        else:
            lab = congs[int(rng.integers(len(congs)))].labels
            blocks = [np.nonzero(lab == b)[0] for b in range(int(lab.max()) + 1)]
            target = rng.integers(len(blocks), size=len(blocks))
            f = np.empty(G.size, dtype=np.int64)
            for b, blk in enumerate(blocks):
                dest = blocks[target[b]]
                f[blk] = dest[rng.integers(len(dest), size=len(blk))]
        unary[f"u{i}"] = np.asarray(f, dtype=np.int64)
    return expand_group(G, unary, name=f"{G.name}+{len(unary)}u")
