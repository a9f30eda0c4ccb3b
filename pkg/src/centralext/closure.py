"""Subpower closure: the least subuniverse of A^k containing a set of seeds.

Elements of A^k are coordinate rows.  When n^k fits in an int64 the rows
are packed into mixed-radix integers and membership is a bitmap (or a
sorted array for very large spaces); otherwise rows are hashed as bytes.

Two strategies are available.  The generic one is a level-by-level BFS
applying every operation to every argument tuple that contains at least
one element found in the previous level, in lexicographic order of the
argument indices.  The ``semigroup`` strategy applies when the only
operation of arity >= 2 is an associative binary one: every element is
then a product of "generators", so closing under right multiplication by
the generators suffices.  This is what makes M(1,1) of A5 feasible.
"""
from __future__ import annotations

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 2_000_000
_BITMAP_LIMIT = 400_000_000
_CHUNK = 2_000_000


def _coord_dtype(n):
    return np.uint8 if n <= 256 else (np.uint16 if n <= 65536 else np.int64)


class _PackedStore:
    def __init__(self, n, k):
        self.n, self.k = n, k
        self.radix = np.array([n ** (k - 1 - c) for c in range(k)], dtype=np.int64)
        self.space = n ** k
        if self.space <= _BITMAP_LIMIT:
            self.bitmap = np.zeros(self.space, dtype=bool)
            self.sorted = None
        else:
            self.bitmap = None
            self.sorted = np.zeros(0, dtype=np.int64)
        self.keys = []

    def pack(self, rows):
        return rows.astype(np.int64) @ self.radix

    def add_new(self, rows):
        """Insert rows, return the subset (in first-occurrence order) that was new."""
        if len(rows) == 0:
            return rows
        keys = self.pack(rows)
        _, first = np.unique(keys, return_index=True)
        first.sort()
        keys = keys[first]
        rows = rows[first]
        if self.bitmap is not None:
            fresh = ~self.bitmap[keys]
            keys = keys[fresh]
            rows = rows[fresh]
            self.bitmap[keys] = True
        else:
            pos = np.searchsorted(self.sorted, keys)
            pos = np.minimum(pos, max(len(self.sorted) - 1, 0))
            if len(self.sorted):
                fresh = self.sorted[pos] != keys
            else:
                fresh = np.ones(len(keys), dtype=bool)
            keys = keys[fresh]
            rows = rows[fresh]
            self.sorted = np.union1d(self.sorted, keys)
        self.keys.append(keys)
        return rows

    def finish(self):
        keys = np.concatenate(self.keys) if self.keys else np.zeros(0, dtype=np.int64)
        return keys


class _RowStore:
    def __init__(self, n, k):
        self.seen = {}

    def add_new(self, rows):
        rows = np.ascontiguousarray(rows)
        keep = []
        for i in range(len(rows)):
            b = rows[i].tobytes()
            if b not in self.seen:
                self.seen[b] = len(self.seen)
                keep.append(i)
        return rows[keep]

    def finish(self):
        return None


def _make_store(n, k):
    if n ** k < 2 ** 62:
        return _PackedStore(n, k)
    return _RowStore(n, k)


def _apply(tab, args, k):
    # args: list of (m, k) coordinate arrays; table applied coordinatewise
    out = np.empty_like(args[0])
    for c in range(k):
        out[:, c] = tab[tuple(a[:, c] for a in args)]
    return out


def is_associative(tab) -> bool:
    """Light's test. Elements b with (ab)c = a(bc) for all a, c are closed
    under the product, so it suffices to test a generating set of (A, *),
    which is grown greedily from right-multiplication closures."""
    n = tab.shape[0]
    t = np.asarray(tab, dtype=np.int64)
    reached = np.zeros(n, dtype=bool)
    gens = []
    while not reached.all():
        g = int(np.argmin(reached))
        if not np.array_equal(t[t[:, g], :], t[:, t[g, :]]):
            return False
        gens.append(g)
        frontier = np.unique(np.concatenate([t[np.nonzero(reached)[0], g], [g]]))
        frontier = frontier[~reached[frontier]]
        reached[frontier] = True
        while len(frontier):
            nxt = np.unique(t[np.ix_(frontier, gens)])
            frontier = nxt[~reached[nxt]]
            reached[frontier] = True
    return True


def choose_strategy(A) -> str:
    big = [(f, a) for f, a in A.signature.symbols if a >= 2]
    if len(big) == 1 and big[0][1] == 2 and is_associative(A.tables[big[0][0]]):
        return "semigroup"
    return "generic"


class ClosureResult:
    """Rows of the closure in discovery order, with fast index lookup."""

    def __init__(self, n, k, rows, keys):
        self.n, self.k = n, k
        self.rows = rows
        self._keys = keys
        self._order = None
        self._dict = None

    def __len__(self):
        return len(self.rows)

    def index_of(self, rows):
        """Indices of the given rows (array (m,k)); -1 where absent."""
        rows = np.asarray(rows)
        if self._keys is not None:
            radix = np.array([self.n ** (self.k - 1 - c) for c in range(self.k)], dtype=np.int64)
            q = rows.astype(np.int64) @ radix
            if self._order is None:
                self._order = np.argsort(self._keys, kind="stable")
                self._sorted = self._keys[self._order]
            pos = np.searchsorted(self._sorted, q)
            pos = np.minimum(pos, len(self._sorted) - 1)
            hit = self._sorted[pos] == q
            return np.where(hit, self._order[pos], -1)
        if self._dict is None:
            self._dict = {self.rows[i].tobytes(): i for i in range(len(self.rows))}
        rows = np.ascontiguousarray(rows.astype(self.rows.dtype))
        return np.array([self._dict.get(r.tobytes(), -1) for r in rows], dtype=np.int64)


def closure(A, seeds, budget=DEFAULT_BUDGET, strategy="auto") -> ClosureResult:
    """Subuniverse of A^k generated by seeds (array-like of shape (s, k))."""
    n = A.size
    seeds = np.asarray(seeds)
    if seeds.ndim == 1:
        seeds = seeds.reshape(-1, 1)
    k = seeds.shape[1]
    dt = _coord_dtype(n)
    seeds = seeds.astype(dt)
    consts = []
    for f, ar in A.signature.symbols:
        if ar == 0:
            consts.append(np.full((1, k), int(A.tables[f][()]), dtype=dt))
    start = np.concatenate([seeds] + consts) if consts else seeds
    if strategy == "auto":
        strategy = choose_strategy(A)
    store = _make_store(n, k)
    first = store.add_new(start)
    if len(first) > budget:
        raise BudgetExceeded(budget)
    if strategy == "semigroup":
        rows = _semigroup(A, store, first, budget, k)
    else:
        rows = _generic(A, store, first, budget, k)
    return ClosureResult(n, k, rows, store.finish())


def _generic(A, store, first, budget, k):
    chunks = [first]
    allrows = first
    old, cur = 0, len(first)
    ops = [(f, a, A.tables[f]) for f, a in A.signature.symbols if a >= 1]
    while old < cur:
        found = []
        for f, ar, tab in ops:
            for idx in _new_tuples(old, cur, ar):
                args = [allrows[i] for i in idx]
                found.append(store.add_new(_apply(tab, args, k)))
                total = cur + sum(len(x) for x in found)
                if total > budget:
                    raise BudgetExceeded(budget)
        new = [x for x in found if len(x)]
        if not new:
            break
        chunks.extend(new)
        allrows = np.concatenate(chunks)
        chunks = [allrows]
        old, cur = cur, len(allrows)
    return allrows


def _new_tuples(old, cur, ar):
    """Index tuples over [0,cur)^ar with some entry >= old, lex order, chunked."""
    blocks = []
    for j in range(ar):
        ranges = [np.arange(0, old)] * j + [np.arange(old, cur)] + [np.arange(0, cur)] * (ar - 1 - j)
        if any(len(r) == 0 for r in ranges):
            continue
        blocks.append(ranges)
    # total count, chunk over the first axis to bound memory
    out = []
    for ranges in blocks:
        rest = 1
        for r in ranges[1:]:
            rest *= len(r)
        step = max(1, _CHUNK // max(rest, 1))
        for s in range(0, len(ranges[0]), step):
            sub = [ranges[0][s:s + step]] + ranges[1:]
            grid = np.meshgrid(*sub, indexing="ij")
            out.append(tuple(g.ravel() for g in grid))
    # merge blocks into global lex order when small enough
    if len(out) > 1 and sum(len(o[0]) for o in out) <= _CHUNK:
        cols = [np.concatenate([o[c] for o in out]) for c in range(ar)]
        order = np.lexsort(cols[::-1])
        out = [tuple(c[order] for c in cols)]
    return out


def _semigroup(A, store, first, budget, k):
    mul = [f for f, a in A.signature.symbols if a == 2][0]
    tab = A.tables[mul]
    unary = [A.tables[f] for f, a in A.signature.symbols if a == 1]
    chunks = [first]
    total = len(first)

    def rmul_all(block, gens):
        """block * g for every g in gens, chunked; pushes new rows as it goes."""
        if not len(block) or not len(gens):
            return
        step = max(1, _CHUNK // len(gens))
        for s in range(0, len(block), step):
            b = block[s:s + step]
            res = np.empty((len(b), len(gens), k), dtype=block.dtype)
            for c in range(k):
                res[:, :, c] = tab[b[:, c][:, None], gens[:, c][None, :]]
            push(store.add_new(res.reshape(-1, k)))

    def push(new):
        nonlocal total
        if len(new):
            chunks.append(new)
            total += len(new)
            if total > budget:
                raise BudgetExceeded(budget)

    gens = first.copy()
    pending = first.copy()    # generators not yet applied to older elements
    frontier_start = 0
    unary_done = 0
    while True:
        # right multiplication by the generators until saturation
        while True:
            allrows = np.concatenate(chunks)
            chunks[:] = [allrows]
            start = frontier_start
            frontier_start = len(allrows)
            before = total
            if len(pending):
                rmul_all(allrows[:start], pending)
                pending = pending[:0]
            rmul_all(allrows[start:], gens)
            if total == before:
                break
        # unary operations on everything not yet visited
        allrows = np.concatenate(chunks)
        chunks[:] = [allrows]
        block = allrows[unary_done:]
        unary_done = len(allrows)
        before = total
        for ut in unary:
            res = np.empty_like(block)
            for c in range(k):
                res[:, c] = ut[block[:, c]]
            new = store.add_new(res)
            push(new)
            gens = np.concatenate([gens, new])
            pending = np.concatenate([pending, new])
        if total == before:
            break
        frontier_start = unary_done
    return np.concatenate(chunks)
