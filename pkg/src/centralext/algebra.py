"""Finite algebras given by operation tables, and the basic constructions on them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import closure as _closure
from .closure import DEFAULT_BUDGET
from .errors import (BudgetExceeded, IncompatiblePartition, LimitExceeded,
                     NotGenerated, NotSurjective, SignatureMismatch,
                     VerificationFailed)
from .termlang import Identity, Signature, eval_term_vec


class FiniteAlgebra:
    """Universe {0..n-1} with one numpy table of shape (n,)*arity per symbol."""

    def __init__(self, signature: Signature, size: int, tables: dict, labels=None, name=""):
        self.signature = signature
        self.size = int(size)
        self.name = name
        self.labels = list(labels) if labels is not None else None
        self.tables = {}
        for f, ar in signature.symbols:
            if f not in tables:
                raise SignatureMismatch(f"missing table for {f}")
            t = np.asarray(tables[f], dtype=np.int64)
            if t.shape != (self.size,) * ar:
                t = t.reshape((self.size,) * ar)
            if t.size and (t.min() < 0 or t.max() >= self.size):
                raise ValueError(f"table for {f} out of range")
            t.setflags(write=False)
            self.tables[f] = t
        if self.labels is not None and len(self.labels) != self.size:
            raise ValueError("label count does not match size")

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"FiniteAlgebra({self.name or '?'}, size={self.size}, {self.signature})"

    def op(self, f, *args):
        return int(self.tables[f][tuple(args)])

    def label(self, x):
        return str(self.labels[x]) if self.labels else str(x)

    def same_as(self, other) -> bool:
        return (self.signature.symbols == other.signature.symbols and self.size == other.size
                and all(np.array_equal(self.tables[f], other.tables[f]) for f in self.tables))

    def is_idempotent(self, u) -> bool:
        return all(int(self.tables[f][(u,) * ar]) == u for f, ar in self.signature.symbols)

    def constants(self):
        return {f: int(self.tables[f][()]) for f, ar in self.signature.symbols if ar == 0}


def _require_same_signature(A, B):
    if A.signature.symbols != B.signature.symbols:
        raise SignatureMismatch("algebras have different signatures")


def trivial_algebra(sig: Signature) -> FiniteAlgebra:
    return FiniteAlgebra(sig, 1, {f: np.zeros((1,) * a, dtype=np.int64) for f, a in sig.symbols},
                         name="trivial")


def direct_product(A: FiniteAlgebra, B: FiniteAlgebra):
    """A x B with element (a, b) stored at a*|B| + b; returns (P, p1, p2)."""
    _require_same_signature(A, B)
    nA, nB = A.size, B.size
    tables = {}
    for f, ar in A.signature.symbols:
        if ar == 0:
            tables[f] = np.array(A.tables[f][()] * nB + B.tables[f][()])
            continue
        idx = np.indices((nA * nB,) * ar).reshape(ar, -1)
        a = A.tables[f][tuple(idx // nB)]
        b = B.tables[f][tuple(idx % nB)]
        tables[f] = (a * nB + b).reshape((nA * nB,) * ar)
    labels = None
    if A.labels or B.labels:
        labels = [f"({A.label(a)},{B.label(b)})" for a in range(nA) for b in range(nB)]
    P = FiniteAlgebra(A.signature, nA * nB, tables, labels, name=f"{A.name}x{B.name}")
    xs = np.arange(nA * nB)
    p1 = Homomorphism(P, A, xs // nB)
    p2 = Homomorphism(P, B, xs % nB)
    return P, p1, p2


def algebra_from_rows(A: FiniteAlgebra, res: "_closure.ClosureResult", name="", budget=DEFAULT_BUDGET):
    """Re-index a closed set of rows of A^k as an algebra with its own tables."""
    rows = res.rows
    m = len(rows)
    k = rows.shape[1]
    tables = {}
    for f, ar in A.signature.symbols:
        if m ** ar > max(budget, 1) * 64:
            raise BudgetExceeded(budget, "table construction")
        if ar == 0:
            r = np.array([[int(A.tables[f][()])] * k])
            tables[f] = np.array(res.index_of(r)[0])
            continue
        idx = np.indices((m,) * ar).reshape(ar, -1)
        out = np.empty((idx.shape[1], k), dtype=np.int64)
        for c in range(k):
            out[:, c] = A.tables[f][tuple(rows[idx[j], c] for j in range(ar))]
        ix = res.index_of(out)
        if (ix < 0).any():
            raise VerificationFailed("closure is not closed under " + f)
        tables[f] = ix.reshape((m,) * ar)
    return FiniteAlgebra(A.signature, m, tables, name=name)


def subalgebra_generated(P: FiniteAlgebra, seeds, budget=DEFAULT_BUDGET, strategy="auto"):
    """Least subuniverse of P containing seeds; returns (S, inclusion array)."""
    seeds = np.asarray(list(seeds), dtype=np.int64).reshape(-1, 1)
    res = _closure.closure(P, seeds, budget, strategy)
    S = algebra_from_rows(P, res, name=f"sub({P.name})", budget=budget)
    inc = res.rows[:, 0].astype(np.int64)
    if P.labels:
        S.labels = [P.labels[i] for i in inc]
    return S, inc


def satisfies(A: FiniteAlgebra, ident: Identity, return_witness=False, chunk=4_000_000):
    """Check an identity on all of A^k; the first variable is split into
    slices so that each evaluation stays below ``chunk`` entries."""
    vs = ident.variables
    k = len(vs)
    n = A.size
    if k == 0:
        ok = eval_term_vec(ident.lhs, A, {}) == eval_term_vec(ident.rhs, A, {})
        return (bool(ok), None) if return_witness else bool(ok)
    step = max(1, chunk // max(n ** (k - 1), 1))
    for s in range(0, n, step):
        first = np.arange(s, min(n, s + step))
        env = {}
        for i, v in enumerate(vs):
            shape = [1] * k
            shape[i] = len(first) if i == 0 else n
            env[v] = (first if i == 0 else np.arange(n)).reshape(shape)
        full = (len(first),) + (n,) * (k - 1)
        l = np.broadcast_to(eval_term_vec(ident.lhs, A, env), full)
        r = np.broadcast_to(eval_term_vec(ident.rhs, A, env), full)
        bad = np.argwhere(l != r)
        if len(bad):
            if return_witness:
                w = [int(x) for x in bad[0]]
                w[0] += s
                return False, dict(zip(vs, w))
            return False
    return (True, None) if return_witness else True


def satisfies_all(A, axioms) -> bool:
    return all(satisfies(A, ax) for ax in axioms)


def find_idempotents(A: FiniteAlgebra) -> list:
    return [u for u in range(A.size) if A.is_idempotent(u)]


# --- homomorphisms -------------------------------------------------------------

class Homomorphism:
    def __init__(self, domain, codomain, mapping, zero_preserving=False, check=False):
        self.domain = domain
        self.codomain = codomain
        self.map = np.asarray(mapping, dtype=np.int64)
        self.zero_preserving = zero_preserving
        if check and not self.is_homomorphism():
            raise VerificationFailed("map does not commute with the operations")

    def __call__(self, x):
        return int(self.map[x])

    def __eq__(self, other):
        return isinstance(other, Homomorphism) and np.array_equal(self.map, other.map)

    def __hash__(self):
        return hash(self.map.tobytes())

    def is_homomorphism(self) -> bool:
        return is_homomorphism(self.domain, self.codomain, self.map)

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.codomain.size

    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.domain.size

    def kernel(self):
        from .congruence import Congruence
        return Congruence.from_labels(self.domain, self.map)

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """self after other."""
        return Homomorphism(other.domain, self.codomain, self.map[other.map])


def is_homomorphism(A, B, mapping) -> bool:
    h = np.asarray(mapping)
    for f, ar in A.signature.symbols:
        ta, tb = A.tables[f], B.tables[f]
        if ar == 0:
            if h[ta[()]] != tb[()]:
                return False
            continue
        idx = np.indices((A.size,) * ar)
        if not np.array_equal(h[ta], tb[tuple(h[i] for i in idx)]):
            return False
    return True


def generating_set(A: FiniteAlgebra, budget=DEFAULT_BUDGET) -> list:
    """A small generating set, chosen greedily (largest new closure first)."""
    gens: list = []
    reached = _reach(A, gens, budget)
    while len(reached) < A.size:
        best, best_size = None, -1
        for x in range(A.size):
            if x in reached:
                continue
            s = len(_reach(A, gens + [x], budget))
            if s > best_size:
                best, best_size = x, s
            if s == A.size:
                break
        gens.append(best)
        reached = _reach(A, gens, budget)
    # drop redundant generators
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if len(_reach(A, rest, budget)) == A.size:
            gens = rest
    return gens


def _reach(A, gens, budget=DEFAULT_BUDGET) -> set:
    if not gens and not A.constants():
        return set()
    res = _closure.closure(A, np.array(gens, dtype=np.int64).reshape(-1, 1), budget)
    return set(int(x) for x in res.rows[:, 0])


def extend_map(A, B, assign: dict):
    """Extend a partial assignment to the subalgebra it generates.

    Returns (domain elements, images) as arrays, or None on conflict."""
    mp = np.full(A.size, -1, dtype=np.int64)
    dom = []
    for f, ar in A.signature.symbols:
        if ar == 0:
            a, b = int(A.tables[f][()]), int(B.tables[f][()])
            if mp[a] >= 0 and mp[a] != b:
                return None
            if mp[a] < 0:
                mp[a] = b
                dom.append(a)
    for a, b in assign.items():
        if mp[a] >= 0 and mp[a] != b:
            return None
        if mp[a] < 0:
            mp[a] = b
            dom.append(a)
    ops = [(f, ar) for f, ar in A.signature.symbols if ar >= 1]
    d = np.array(dom, dtype=np.int64)
    old, cur = 0, len(d)
    while old < cur:
        new_a, new_b = [], []
        for f, ar in ops:
            for idx in _closure._new_tuples(old, cur, ar):
                xa = A.tables[f][tuple(d[i] for i in idx)]
                xb = B.tables[f][tuple(mp[d[i]] for i in idx)]
                known = mp[xa]
                clash = (known >= 0) & (known != xb)
                if clash.any():
                    return None
                fresh = known < 0
                xa, xb = xa[fresh], xb[fresh]
                if len(xa):
                    # the same new element reached with two different images
                    chk = np.full(A.size, -1, dtype=np.int64)
                    chk[xa] = xb
                    if (chk[xa] != xb).any():
                        return None
                    _, first = np.unique(xa, return_index=True)
                    order = np.sort(first)
                    xa, xb = xa[order], xb[order]
                    mp[xa] = xb
                    new_a.append(xa)
                    new_b.append(xb)
        if not new_a:
            break
        d = np.concatenate([d] + new_a)
        old, cur = cur, len(d)
    return d, mp[d]


def enumerate_homs(A, B, zero_preserving=False, zeros=(0, 0), limit=1_000_000,
                   fixed: dict | None = None, gens=None) -> list:
    """All homomorphisms A -> B, by backtracking over a generating set of A."""
    _require_same_signature(A, B)
    base = dict(fixed or {})
    if zero_preserving:
        za, zb = zeros
        if base.get(za, zb) != zb:
            return []
        base[za] = zb
    if gens is None:
        gens = generating_set(A)
    gens = [g for g in gens if g not in base]
    out = []

    def rec(i, assign):
        ext = extend_map(A, B, assign)
        if ext is None:
            return
        if i == len(gens):
            dom, img = ext
            if len(dom) != A.size:
                return
            mp = np.empty(A.size, dtype=np.int64)
            mp[dom] = img
            out.append(Homomorphism(A, B, mp, zero_preserving))
            if len(out) > limit:
                raise LimitExceeded(limit, "homomorphism enumeration")
            return
        g = gens[i]
        dom, img = ext
        hit = np.nonzero(dom == g)[0]
        if len(hit):
            rec(i + 1, assign)
            return
        for b in range(B.size):
            assign[g] = b
            rec(i + 1, assign)
            del assign[g]

    rec(0, base)
    out.sort(key=lambda h: tuple(h.map))
    return out


def find_isomorphism(A, B):
    if A.size != B.size:
        return None
    gens = generating_set(A)
    for h in enumerate_homs(A, B, gens=gens):
        if h.is_injective():
            return h
    return None


def is_isomorphic(A, B) -> bool:
    return find_isomorphism(A, B) is not None


# --- quotients -------------------------------------------------------------------

def quotient(A: FiniteAlgebra, theta):
    """A/theta with blocks in canonical order; returns (Q, canonical surjection)."""
    lab = np.asarray(theta.labels, dtype=np.int64)
    nb = int(lab.max()) + 1 if len(lab) else 0
    reps = np.array([np.nonzero(lab == b)[0][0] for b in range(nb)], dtype=np.int64)
    tables = {}
    for f, ar in A.signature.symbols:
        t = A.tables[f]
        if ar == 0:
            tables[f] = np.array(lab[t[()]])
            continue
        q = lab[t[np.ix_(*([reps] * ar))]]
        idx = np.indices((A.size,) * ar)
        if not np.array_equal(lab[t], q[tuple(lab[i] for i in idx)]):
            raise IncompatiblePartition(f"partition is not compatible with {f}")
        tables[f] = q
    labels = None
    if A.labels:
        labels = ["{" + ",".join(A.label(x) for x in np.nonzero(lab == b)[0]) + "}" for b in range(nb)]
    Q = FiniteAlgebra(A.signature, nb, tables, labels, name=f"{A.name}/~")
    return Q, Homomorphism(A, Q, lab)


# --- free algebras ----------------------------------------------------------------

@dataclass
class FreeAlgebra:
    """F_{HSP(A)}(k) as the subalgebra of A^{A^k} generated by the projections."""
    F: FiniteAlgebra
    generators: list
    base: FiniteAlgebra
    k: int
    rows: np.ndarray        # row i = term operation of element i on A^k (lex order)

    def extend(self, C: FiniteAlgebra, images: Sequence[int]) -> Homomorphism:
        """The unique homomorphism F -> C sending generator i to images[i]."""
        assign = {}
        for g, c in zip(self.generators, images):
            if assign.get(g, c) != c:
                raise VerificationFailed("generator images inconsistent")
            assign[g] = c
        ext = extend_map(self.F, C, assign)
        if ext is None:
            raise VerificationFailed("target is not in the variety generated by the base algebra")
        dom, img = ext
        if len(dom) != self.F.size:
            raise NotGenerated("free generators do not generate F")
        mp = np.empty(self.F.size, dtype=np.int64)
        mp[dom] = img
        return Homomorphism(self.F, C, mp)


def free_algebra_hsp(A: FiniteAlgebra, k: int, budget=DEFAULT_BUDGET) -> FreeAlgebra:
    if k < 1:
        raise ValueError("k must be positive")
    n = A.size
    pts = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64)  # (n^k, k)
    seeds = pts.T.copy()  # projection i is column i of the points
    res = _closure.closure(A, seeds, budget)
    F = algebra_from_rows(A, res, name=f"F_{A.name}({k})", budget=budget)
    gens = [int(i) for i in res.index_of(seeds)]
    return FreeAlgebra(F, gens, A, k, res.rows.astype(np.int64))


@dataclass
class FreePresentation:
    free: FreeAlgebra
    theta: object                 # Congruence on F
    target: FiniteAlgebra
    images: list                  # Q-images of the free generators
    evaluation: Homomorphism      # F -> Q
    iso: Homomorphism             # F/theta -> Q

    @property
    def F(self):
        return self.free.F

    @property
    def generators(self):
        return self.free.generators


def presentation_of(Q: FiniteAlgebra, A: FiniteAlgebra, k: int, images=None,
                    budget=DEFAULT_BUDGET, free: FreeAlgebra | None = None) -> FreePresentation:
    """Present Q as F_{HSP(A)}(k)/theta.

    Generator i goes to images[i]; by default to the i-th element of a greedy
    generating sequence of Q, repeating the last one if k is larger."""
    from .congruence import Congruence
    _require_same_signature(Q, A)
    if images is None:
        gs = generating_set(Q)
        if len(gs) > k:
            raise NotGenerated(f"Q needs {len(gs)} generators, only {k} available")
        if not gs:
            gs = [0]
        images = [gs[i] if i < len(gs) else gs[-1] for i in range(k)]
    images = [int(x) for x in images]
    if len(images) != k:
        raise ValueError("need one image per free generator")
    if free is None:
        free = free_algebra_hsp(A, k, budget)
    ev = free.extend(Q, images)
    if not ev.is_surjective():
        raise NotGenerated("generator images do not generate Q")
    theta = Congruence.from_labels(free.F, ev.map)
    Fq, nat = quotient(free.F, theta)
    iso_map = np.empty(Fq.size, dtype=np.int64)
    iso_map[nat.map] = ev.map
    iso = Homomorphism(Fq, Q, iso_map)
    if not (iso.is_homomorphism() and iso.is_injective() and iso.is_surjective()):
        raise VerificationFailed("F/theta is not isomorphic to Q")
    return FreePresentation(free, theta, Q, images, ev, iso)
