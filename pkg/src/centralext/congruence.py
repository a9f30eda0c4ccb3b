"""Partitions, congruence generation and congruence lattices."""
from __future__ import annotations

import numpy as np

from .errors import CarrierMismatch, IncompatiblePartition, LimitExceeded, ParseError


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, a):
        p = self.parent
        root = a
        while p[root] != root:
            root = p[root]
        while p[a] != root:
            p[a], a = root, p[a]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def labels(self):
        return canonical_labels([self.find(i) for i in range(len(self.parent))])


def canonical_labels(keys) -> np.ndarray:
    """Relabel so that blocks are numbered in order of their least element."""
    keys = np.asarray(keys)
    n = len(keys)
    out = np.empty(n, dtype=np.int64)
    seen = {}
    for i in range(n):
        k = keys[i].item() if hasattr(keys[i], "item") else keys[i]
        if k not in seen:
            seen[k] = len(seen)
        out[i] = seen[k]
    return out


class Partition:
    """Equivalence relation on {0..n-1}, stored as canonical block labels."""

    def __init__(self, labels):
        self.labels = canonical_labels(labels)
        self.labels.setflags(write=False)

    @property
    def n(self):
        return len(self.labels)

    @classmethod
    def zero(cls, n):
        return cls(np.arange(n))

    @classmethod
    def one(cls, n):
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_blocks(cls, n, blocks):
        lab = np.full(n, -1, dtype=np.int64)
        for i, b in enumerate(blocks):
            for x in b:
                if lab[x] >= 0:
                    raise ValueError(f"element {x} in two blocks")
                lab[x] = i
        nxt = len(blocks)
        for x in range(n):
            if lab[x] < 0:
                lab[x] = nxt
                nxt += 1
        return cls(lab)

    @property
    def num_blocks(self):
        return int(self.labels.max()) + 1 if self.n else 0

    def blocks(self):
        out = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.labels):
            out[b].append(x)
        return out

    def block_of(self, x):
        return list(np.nonzero(self.labels == self.labels[x])[0])

    def related(self, a, b) -> bool:
        return self.labels[a] == self.labels[b]

    def pairs(self) -> np.ndarray:
        """All (x, y) with x ~ y, lexicographically sorted."""
        out = []
        for b in self.blocks():
            bb = np.array(b)
            g = np.stack(np.meshgrid(bb, bb, indexing="ij"), -1).reshape(-1, 2)
            out.append(g)
        if not out:
            return np.zeros((0, 2), dtype=np.int64)
        allp = np.concatenate(out)
        order = np.lexsort((allp[:, 1], allp[:, 0]))
        return allp[order]

    def size(self) -> int:
        """Number of related pairs."""
        counts = np.bincount(self.labels)
        return int((counts ** 2).sum())

    def is_zero(self):
        return self.num_blocks == self.n

    def is_one(self):
        return self.num_blocks <= 1

    def __le__(self, other) -> bool:
        # every block of self lies inside a block of other
        lab = other.labels
        for b in self.blocks():
            if len(set(lab[b].tolist())) > 1:
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def key(self):
        return self.labels.tobytes()

    def text(self) -> str:
        return "|".join(",".join(str(x) for x in b) for b in self.blocks())

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Partition({self.text()})"


def parse_partition(text: str, n: int) -> Partition:
    text = text.strip()
    if text in ("zero", "0"):
        return Partition.zero(n)
    if text in ("full", "one", "1"):
        return Partition.one(n)
    blocks = []
    for part in text.split("|"):
        part = part.strip()
        if not part:
            continue
        try:
            blocks.append([int(x) for x in part.split(",")])
        except ValueError:
            raise ParseError(f"bad partition block {part!r}") from None
    for b in blocks:
        for x in b:
            if not 0 <= x < n:
                raise ParseError(f"element {x} out of range")
    return Partition.from_blocks(n, blocks)


class Congruence(Partition):
    def __init__(self, algebra, labels, verified=False):
        super().__init__(labels)
        if len(self.labels) != algebra.size:
            raise CarrierMismatch("partition size differs from algebra size")
        self.algebra = algebra
        self.verified = verified

    @classmethod
    def from_labels(cls, A, labels, check=True):
        c = cls(A, labels)
        if check:
            c.verify()
        return c

    @classmethod
    def from_partition(cls, A, p: Partition, check=True):
        return cls.from_labels(A, p.labels, check)

    @classmethod
    def zero_of(cls, A):
        return cls(A, np.arange(A.size), True)

    @classmethod
    def one_of(cls, A):
        return cls(A, np.zeros(A.size, dtype=np.int64), True)

    def is_compatible(self) -> bool:
        A = self.algebra
        lab = self.labels
        for f, ar in A.signature.symbols:
            t = A.tables[f]
            for i in range(ar):
                # f(.., a, ..) ~ f(.., rep(a), ..) for every a suffices
                reps = np.array([np.nonzero(lab == lab[a])[0][0] for a in range(A.size)])
                moved = np.take(t, reps, axis=i)
                if not np.array_equal(lab[t], lab[moved]):
                    return False
        return True

    def verify(self):
        if not self.is_compatible():
            raise IncompatiblePartition("partition is not a congruence")
        self.verified = True
        return self

    def __repr__(self):
        return f"Congruence({self.text()})"


def _check_carrier(a, b):
    if a.algebra is not b.algebra and a.n != b.n:
        raise CarrierMismatch("congruences live on different algebras")


def cg(A, pairs) -> Congruence:
    """Least congruence of A containing the given pairs."""
    uf = UnionFind(A.size)
    ops = [(A.tables[f], ar) for f, ar in A.signature.symbols if ar >= 1]
    stack = [(int(a), int(b)) for a, b in pairs]
    while stack:
        a, b = stack.pop()
        if not uf.union(a, b):
            continue
        for t, ar in ops:
            for i in range(ar):
                ta = np.take(t, a, axis=i).ravel()
                tb = np.take(t, b, axis=i).ravel()
                diff = ta != tb
                if diff.any():
                    stack.extend(zip(ta[diff].tolist(), tb[diff].tolist()))
    return Congruence(A, uf.labels(), verified=True)


def join(th: Congruence, ps: Congruence) -> Congruence:
    _check_carrier(th, ps)
    uf = UnionFind(th.n)
    for lab in (th.labels, ps.labels):
        first = {}
        for x, b in enumerate(lab.tolist()):
            if b in first:
                uf.union(first[b], x)
            else:
                first[b] = x
    # the equivalence join of two congruences is a congruence
    return Congruence(th.algebra, uf.labels(), verified=True)


def meet(th: Congruence, ps: Congruence) -> Congruence:
    _check_carrier(th, ps)
    keys = th.labels * (ps.num_blocks + 1) + ps.labels
    return Congruence(th.algebra, keys, verified=True)


def join_all(A, congs) -> Congruence:
    out = Congruence.zero_of(A)
    for c in congs:
        out = join(out, c)
    return out


def principal_congruences(A) -> list:
    seen = {}
    for a in range(A.size):
        for b in range(a + 1, A.size):
            c = cg(A, [(a, b)])
            seen.setdefault(c.key(), c)
    return list(seen.values())


def all_congruences(A, limit=100_000) -> list:
    """Con A, sorted by number of blocks (descending) then canonical labels."""
    prin = principal_congruences(A)
    zero = Congruence.zero_of(A)
    found = {zero.key(): zero}
    for p in prin:
        found.setdefault(p.key(), p)
    queue = list(found.values())
    while queue:
        c = queue.pop()
        for p in prin:
            j = join(c, p)
            if j.key() not in found:
                found[j.key()] = j
                queue.append(j)
                if len(found) > limit:
                    raise LimitExceeded(limit, "congruence enumeration")
    return sorted(found.values(), key=lambda c: (-c.num_blocks, c.labels.tolist()))


def image_congruence(theta: Congruence, nat, Q) -> Congruence:
    """The congruence theta/psi on Q = A/psi, for psi <= theta (nat: A -> Q)."""
    lab = np.empty(Q.size, dtype=np.int64)
    lab[nat.map] = theta.labels
    return Congruence.from_labels(Q, lab)


def preimage_congruence(theta_q: Congruence, nat) -> Congruence:
    return Congruence(nat.domain, theta_q.labels[nat.map], verified=True)
