"""The term-condition commutator via the matrix algebra M(alpha, beta).

A 2x2 matrix [r s; u v] is stored as the 4-tuple (r, s, u, v) in A^4.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import closure as _closure
from .closure import DEFAULT_BUDGET
from .congruence import (Congruence, UnionFind, all_congruences, cg, join_all,
                         meet)
from .errors import VerificationFailed
from .termlang import Term, term_operation


def subalgebra_generators(A, rows, budget=DEFAULT_BUDGET, strategy="auto"):
    """Greedy generating subset (in the given order) of the subuniverse of A^k
    spanned by ``rows``, which must itself be closed."""
    rows = np.asarray(rows)
    k = rows.shape[1]
    gens = []
    reached = _closure.closure(A, np.zeros((0, k), dtype=np.int64), budget, strategy) \
        if A.constants() else None
    for r in rows:
        if reached is not None and len(reached) and reached.index_of(r[None, :])[0] >= 0:
            continue
        gens.append(r)
        reached = _closure.closure(A, np.array(gens), budget, strategy)
        if len(reached) == len(rows):
            break
    return np.array(gens, dtype=np.int64).reshape(-1, k)


class MatrixAlgebra:
    """M(alpha, beta) as a closed set of rows (r, s, u, v)."""

    def __init__(self, A, alpha, beta, res, generators):
        self.algebra = A
        self.alpha = alpha
        self.beta = beta
        self._res = res
        self.generators = generators

    @property
    def rows(self):
        return self._res.rows

    def __len__(self):
        return len(self._res)

    def contains(self, r, s, u, v) -> bool:
        return bool(self._res.index_of(np.array([[r, s, u, v]]))[0] >= 0)


def matrix_algebra(A, alpha, beta, budget=DEFAULT_BUDGET, strategy="auto") -> MatrixAlgebra:
    """Subalgebra of A^4 generated by [a a; b b] for (a,b) in alpha and
    [u v; u v] for (u,v) in beta.

    Only generators of the pair algebras A(alpha) and A(beta) are used as
    seeds: (a,b) -> [a a; b b] is an embedding of A(alpha) into A^4, so the
    images of a generating set generate the same subalgebra."""
    ga = subalgebra_generators(A, alpha.pairs(), budget, strategy)
    gb = subalgebra_generators(A, beta.pairs(), budget, strategy)
    seeds = [np.stack([ga[:, 0], ga[:, 0], ga[:, 1], ga[:, 1]], 1),
             np.stack([gb[:, 0], gb[:, 1], gb[:, 0], gb[:, 1]], 1)]
    seeds = np.concatenate(seeds).astype(np.int64)
    res = _closure.closure(A, seeds, budget, strategy)
    return MatrixAlgebra(A, alpha, beta, res, seeds)


@dataclass
class CommutatorTrace:
    levels: list                       # tau^0, tau^1, ... as Congruences
    witnesses: list = field(default_factory=list)  # per level: {(u,v): (r,s,u,v)}
    matrix_size: int = 0

    @property
    def iterations(self):
        return len(self.levels) - 1


def _components(n, u, v):
    uf = UnionFind(n)
    for a, b in zip(u.tolist(), v.tolist()):
        uf.union(a, b)
    return uf.labels()


def tc_commutator(A, alpha, beta, budget=DEFAULT_BUDGET, return_trace=False, M=None):
    """[alpha, beta] as the fixpoint of the tau recursion over M(alpha, beta)."""
    if M is None:
        M = matrix_algebra(A, alpha, beta, budget)
    rows = M.rows
    n = A.size
    r = rows[:, 0].astype(np.int64)
    s = rows[:, 1].astype(np.int64)
    u = rows[:, 2].astype(np.int64)
    v = rows[:, 3].astype(np.int64)
    tau = Congruence.zero_of(A)
    levels = [tau]
    witnesses = []
    while True:
        lab = tau.labels
        mask = lab[r] == lab[s]
        keys = u[mask] * n + v[mask]
        uniq, first = np.unique(keys, return_index=True)
        pu, pv = uniq // n, uniq % n
        new = Congruence(A, _components(n, pu, pv), verified=False)
        if return_trace:
            idx = np.nonzero(mask)[0][first]
            wit = {}
            for a, b, i in zip(pu.tolist(), pv.tolist(), idx.tolist()):
                if a != b and not tau.related(a, b):
                    wit[(a, b)] = tuple(int(x) for x in rows[i])
            witnesses.append(wit)
        if new == tau:
            if return_trace:
                witnesses.pop()
            break
        tau = new
        levels.append(tau)
    result = Congruence(A, tau.labels, verified=False)
    result.verify()
    if return_trace:
        return result, CommutatorTrace(levels, witnesses, len(M))
    return result


def r1(A, alpha, beta, budget=DEFAULT_BUDGET, M=None) -> np.ndarray:
    """Boolean n x n matrix of R^1(alpha, beta): (u,v) with [r r; u v] in M."""
    if M is None:
        M = matrix_algebra(A, alpha, beta, budget)
    rows = M.rows.astype(np.int64)
    mask = rows[:, 0] == rows[:, 1]
    rel = np.zeros((A.size, A.size), dtype=bool)
    rel[rows[mask, 2], rows[mask, 3]] = True
    return rel


def meet_with_relation(alpha: Congruence, rel: np.ndarray) -> set:
    """alpha ∧ R as a set of pairs."""
    us, vs = np.nonzero(rel)
    return {(a, b) for a, b in zip(us.tolist(), vs.tolist()) if alpha.related(a, b)}


def congruence_pairs(c: Congruence) -> set:
    return {(int(a), int(b)) for a, b in c.pairs()}


def one(A):
    return Congruence.one_of(A)


def zero(A):
    return Congruence.zero_of(A)


def is_abelian(A, budget=DEFAULT_BUDGET) -> bool:
    return tc_commutator(A, one(A), one(A), budget).is_zero()


def is_central(A, alpha, budget=DEFAULT_BUDGET) -> bool:
    return tc_commutator(A, alpha, one(A), budget).is_zero()


def is_perfect(A, budget=DEFAULT_BUDGET) -> bool:
    return tc_commutator(A, one(A), one(A), budget).is_one()


def is_neutral_check(A, budget=DEFAULT_BUDGET) -> bool:
    """Whether [[1,1],[1,1]] = [1,1], the property of the derived congruence
    used for central extensions of perfect algebras."""
    d = tc_commutator(A, one(A), one(A), budget)
    return tc_commutator(A, d, d, budget) == d


def center(A, V=None, budget=DEFAULT_BUDGET):
    """Largest theta with [theta, 1] = 0.

    Joins the central principal congruences (join-additivity of the
    commutator holds with a difference term); if the join fails the check,
    falls back to scanning the whole congruence lattice.  The route used is
    stored on the result as ``route``."""
    full = one(A)
    cache = {}
    central = []
    for a in range(A.size):
        for b in range(a + 1, A.size):
            c = cg(A, [(a, b)])
            key = c.key()
            if key not in cache:
                cache[key] = tc_commutator(A, c, full, budget).is_zero()
                if cache[key]:
                    central.append(c)
    z = join_all(A, central)
    if tc_commutator(A, z, full, budget).is_zero():
        z.route = "join"
        return z
    best = Congruence.zero_of(A)
    for c in all_congruences(A):
        if tc_commutator(A, c, full, budget).is_zero() and best <= c:
            best = c
    if not tc_commutator(A, best, full, budget).is_zero():
        raise VerificationFailed("no largest central congruence found")
    best.route = "lattice"
    return best


def verify_difference_term(A, m: Term, variables=("x", "y", "z"), congruences=None,
                           budget=DEFAULT_BUDGET) -> dict:
    """Check m(x,x,y) = y and (x, m(x,y,y)) in [alpha,alpha] for x alpha y."""
    tab = term_operation(m, A, list(variables))
    n = A.size
    xs = np.arange(n)
    report = {"identity_ok": True, "identity_failures": [], "commutator_ok": True,
              "commutator_failures": []}
    bad = np.argwhere(tab[xs[:, None], xs[:, None], xs[None, :]] != xs[None, :])
    if len(bad):
        report["identity_ok"] = False
        report["identity_failures"] = [(int(x), int(y)) for x, y in bad[:10]]
    if congruences is None:
        congruences = all_congruences(A)
    for alpha in congruences:
        if alpha.is_zero():
            continue
        aa = tc_commutator(A, alpha, alpha, budget)
        for x, y in alpha.pairs():
            w = int(tab[x, y, y])
            if not aa.related(int(x), w):
                report["commutator_ok"] = False
                report["commutator_failures"].append((alpha.text(), int(x), int(y)))
                break
    report["ok"] = report["identity_ok"] and report["commutator_ok"]
    return report
