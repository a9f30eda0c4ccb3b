"""Pair algebras, kernel algebras, the basic construction and 2-cocycles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import (FiniteAlgebra, Homomorphism, enumerate_homs,
                      find_idempotents, generating_set, is_homomorphism,
                      quotient, satisfies_all)
from .closure import DEFAULT_BUDGET
from .commutator import one, tc_commutator
from .congruence import Congruence, cg, join, meet
from .errors import (DecompositionFailed, NotASection, NotCentral,
                     NotIdempotent, VerificationFailed)
from .termlang import VarietySpec, term_operation
from .zmod import Subquotient, invariant_factors


# --- A(alpha) and Delta ------------------------------------------------------------

class PairAlgebra:
    """A(alpha): the pairs (x, y) in alpha, lexicographically indexed."""

    def __init__(self, A: FiniteAlgebra, alpha: Congruence):
        self.carrier = A
        self.alpha = alpha
        pairs = alpha.pairs().astype(np.int64)
        self.pairs = pairs
        n = A.size
        idx = np.full((n, n), -1, dtype=np.int64)
        idx[pairs[:, 0], pairs[:, 1]] = np.arange(len(pairs))
        self.index = idx
        m = len(pairs)
        tables = {}
        for f, ar in A.signature.symbols:
            t = A.tables[f]
            if ar == 0:
                c = int(t[()])
                tables[f] = np.array(idx[c, c])
                continue
            grid = np.indices((m,) * ar).reshape(ar, -1)
            x = t[tuple(pairs[g, 0] for g in grid)]
            y = t[tuple(pairs[g, 1] for g in grid)]
            tables[f] = idx[x, y].reshape((m,) * ar)
        labels = [f"[{A.label(a)};{A.label(b)}]" for a, b in pairs]
        self.algebra = FiniteAlgebra(A.signature, m, tables, labels, name=f"{A.name}(alpha)")

    def __len__(self):
        return len(self.pairs)

    def pair_index(self, x, y) -> int:
        i = int(self.index[x, y])
        if i < 0:
            raise ValueError(f"({x},{y}) is not in alpha")
        return i


def pair_algebra(A, alpha) -> PairAlgebra:
    return PairAlgebra(A, alpha)


def delta_congruence(A, alpha, beta, P: PairAlgebra | None = None) -> Congruence:
    """Delta_{alpha beta}: generated on A(alpha) by ((u,u),(v,v)), (u,v) in beta."""
    if P is None:
        P = PairAlgebra(A, alpha)
    gens = [(P.pair_index(u, u), P.pair_index(v, v)) for u, v in beta.pairs() if u != v]
    return cg(P.algebra, gens)


# --- kernel algebras -------------------------------------------------------------------

class KernelAlgebra:
    """A finite algebra whose operations are affine over an abelian group
    (x + y = m(x, 0, y)), with an idempotent zero so that they are linear.

    Stores the linear decomposition f(x1..xn) = sum_i r_{f,i}(x_i) and the
    cyclic decomposition of (B, +) used for coordinates."""

    def __init__(self, B: FiniteAlgebra, zero: int, m_table: np.ndarray, name=""):
        self.algebra = B
        self.zero = int(zero)
        self.name = name or B.name
        n = B.size
        if not B.is_idempotent(self.zero):
            raise NotIdempotent(f"zero {zero} is not idempotent")
        z = self.zero
        self.add = np.asarray(m_table[:, z, :], dtype=np.int64)
        self.neg = np.asarray(m_table[z, np.arange(n), z], dtype=np.int64)
        xs = np.arange(n)
        if not (self.add[z] == xs).all() or not (self.add[xs, self.neg] == z).all():
            raise DecompositionFailed("m does not induce a group with the given zero")
        if not np.array_equal(self.add, self.add.T):
            raise DecompositionFailed("induced addition is not commutative")
        if not np.array_equal(self.add[self.add, :], self.add[:, self.add]):
            raise DecompositionFailed("induced addition is not associative")
        self._decompose()
        self._coordinates()

    @classmethod
    def from_algebra(cls, B: FiniteAlgebra, V: VarietySpec, zero=None, name=""):
        if zero is None:
            ids = find_idempotents(B)
            if not ids:
                raise NotIdempotent("algebra has no idempotent element")
            zero = ids[0]
        mt = term_operation(V.difference_term, B, list(V.diff_vars))
        return cls(B, zero, mt, name)

    def _decompose(self):
        B = self.algebra
        n = B.size
        z = self.zero
        self.r = {}
        for f, ar in B.signature.symbols:
            t = B.tables[f]
            rs = []
            for i in range(ar):
                idx = [z] * ar
                idx[i] = slice(None)
                ri = np.asarray(t[tuple(idx)], dtype=np.int64)
                if not np.array_equal(ri[self.add], self.add[ri[:, None], ri[None, :]]):
                    raise DecompositionFailed(f"r_{{{f},{i}}} is not additive")
                rs.append(ri)
            # reconstruct the whole table from the pieces
            if ar:
                acc = np.full((n,) * ar, z, dtype=np.int64)
                grid = np.indices((n,) * ar)
                for i in range(ar):
                    acc = self.add[acc, rs[i][grid[i]]]
                if not np.array_equal(acc, t):
                    raise DecompositionFailed(f"operation {f} is not a sum of unary parts")
            elif int(t[()]) != z:
                raise DecompositionFailed(f"constant {f} is not the zero")
            self.r[f] = rs

    def _coordinates(self):
        n = self.algebra.size
        z = self.zero
        # orders and exponent
        orders = []
        for a in range(n):
            k, x = 1, a
            while x != z:
                x = int(self.add[x, a])
                k += 1
            orders.append(k)
        e = 1
        for o in orders:
            e = e * o // np.gcd(e, o)
        self.exponent = int(e)
        # Cayley-graph presentation on a generating set of (B,+)
        gens = self._additive_generators()
        rels = []
        for g in gens:
            for a in range(n):
                row = np.zeros(n, dtype=np.int64)
                row[a] += 1
                row[g] += 1
                row[int(self.add[a, g])] -= 1
                rels.append(row)
        zr = np.zeros(n, dtype=np.int64)
        zr[z] = 1
        rels.append(zr)
        sq = Subquotient(np.eye(n, dtype=np.int64), np.array(rels), e, n)
        self.mods = list(sq.orders)           # cyclic summand orders
        self.rank = len(self.mods)
        self.coords = np.zeros((n, self.rank), dtype=np.int64)
        for a in range(n):
            u = np.zeros(n, dtype=np.int64)
            u[a] = 1
            self.coords[a] = sq.coords(u)
        self._lookup = {tuple(c): a for a, c in enumerate(self.coords.tolist())}
        if len(self._lookup) != n:
            raise DecompositionFailed("coordinate map is not injective")
        self.basis = [self.element(tuple(int(i == t) for i in range(self.rank))) for t in range(self.rank)]
        # endomorphism matrices in coordinates: column t = coords(r(basis_t))
        self.R = {f: [self.coords[ri[self.basis]].T.copy() if self.rank else np.zeros((0, 0), np.int64)
                      for ri in rs] for f, rs in self.r.items()}

    def _additive_generators(self):
        n = self.algebra.size
        gens, reached = [], {self.zero}
        while len(reached) < n:
            g = min(set(range(n)) - reached)
            gens.append(g)
            frontier = list(reached)
            while frontier:
                nxt = []
                for x in frontier:
                    for h in gens:
                        y = int(self.add[x, h])
                        if y not in reached:
                            reached.add(y)
                            nxt.append(y)
                frontier = nxt
        return gens

    # group helpers
    @property
    def size(self):
        return self.algebra.size

    @property
    def invariant_factors(self):
        return invariant_factors(self.mods)

    def element(self, coords) -> int:
        c = tuple(int(x) % m for x, m in zip(coords, self.mods))
        return self._lookup[c]

    def plus(self, x, y):
        return self.add[x, y]

    def minus(self, x, y):
        return self.add[x, self.neg[y]]

    def times(self, k, x):
        out = self.zero
        for _ in range(k % self.exponent):
            out = int(self.add[out, x])
        return out

    def __repr__(self):
        return f"KernelAlgebra({self.name}, size={self.size}, group={self.invariant_factors})"


def kernel_algebra(A, alpha, V: VarietySpec, check_central=True, budget=DEFAULT_BUDGET):
    """A(alpha)/Delta_{alpha 1} as a KernelAlgebra, with zero the diagonal class.

    Returns the KernelAlgebra; its ``pair_algebra``, ``delta`` and
    ``class_of`` attributes give the link back to pairs of A."""
    if check_central and not tc_commutator(A, alpha, one(A), budget).is_zero():
        raise NotCentral("congruence is not central")
    P = PairAlgebra(A, alpha)
    D = delta_congruence(A, alpha, one(A), P)
    Bq, nat = quotient(P.algebra, D)
    reps = [P.pairs[np.nonzero(D.labels == b)[0][0]] for b in range(Bq.size)]
    Bq.labels = [f"[{A.label(a)};{A.label(b)}]" for a, b in reps]
    Bq.name = f"K({A.name})"
    zero = int(D.labels[P.pair_index(0, 0)])
    mt = term_operation(V.difference_term, Bq, list(V.diff_vars))
    try:
        K = KernelAlgebra(Bq, zero, mt, name=Bq.name)
    except (DecompositionFailed, NotIdempotent) as exc:
        raise DecompositionFailed(f"kernel algebra decomposition failed: {exc}") from exc
    K.carrier = A
    K.alpha = alpha
    K.pair_algebra = P
    K.delta = D
    K.class_index = D.labels[P.index.clip(min=0)]  # class of (x,y), valid where in alpha
    K.class_index = np.where(P.index >= 0, K.class_index, -1)
    return K


def class_of(K: KernelAlgebra, x, y) -> int:
    c = int(K.class_index[x, y])
    if c < 0:
        raise ValueError("pair not in alpha")
    return c


# --- cocycles ------------------------------------------------------------------------------

class Cocycle:
    """Per-symbol tables T_f: Q^{ar f} -> B (entries are B indices)."""

    def __init__(self, Q: FiniteAlgebra, B: KernelAlgebra, tables: dict):
        self.Q = Q
        self.B = B
        self.tables = {}
        for f, ar in Q.signature.symbols:
            t = np.asarray(tables.get(f, np.full((Q.size,) * ar, B.zero)), dtype=np.int64)
            self.tables[f] = t.reshape((Q.size,) * ar)

    @classmethod
    def zero(cls, Q, B):
        return cls(Q, B, {})

    def __add__(self, other):
        return Cocycle(self.Q, self.B, {f: self.B.add[t, other.tables[f]] for f, t in self.tables.items()})

    def __neg__(self):
        return Cocycle(self.Q, self.B, {f: self.B.neg[t] for f, t in self.tables.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return all(np.array_equal(t, other.tables[f]) for f, t in self.tables.items())

    def is_zero(self):
        return all((t == self.B.zero).all() for t in self.tables.values())

    def compose(self, phi, E: KernelAlgebra) -> "Cocycle":
        """phi o T for a map phi: B -> E given as an array."""
        phi = np.asarray(phi.map if hasattr(phi, "map") else phi)
        return Cocycle(self.Q, E, {f: phi[t] for f, t in self.tables.items()})

    def pullback(self, pi: Homomorphism) -> "Cocycle":
        """T o pi, a cocycle on the domain of pi."""
        A = pi.domain
        out = {}
        for f, ar in A.signature.symbols:
            if ar == 0:
                out[f] = self.tables[f].copy()
                continue
            grid = np.indices((A.size,) * ar)
            out[f] = self.tables[f][tuple(pi.map[g] for g in grid)]
        return Cocycle(A, self.B, out)

    def __repr__(self):
        parts = []
        for f, t in self.tables.items():
            nz = np.argwhere(t != self.B.zero)
            parts.append(f"{f}:{len(nz)} nonzero")
        return "Cocycle(" + ", ".join(parts) + ")"


def basic_construction(B: KernelAlgebra, Q: FiniteAlgebra, T: Cocycle):
    """B (x)^T Q on B x Q, element (b, q) stored at b*|Q| + q.

    Returns (algebra, projection onto Q)."""
    nB, nQ = B.size, Q.size
    N = nB * nQ
    tables = {}
    for f, ar in Q.signature.symbols:
        if ar == 0:
            b = B.add[B.algebra.tables[f][()], T.tables[f][()]]
            tables[f] = np.array(b * nQ + Q.tables[f][()])
            continue
        grid = np.indices((N,) * ar).reshape(ar, -1)
        bs = grid // nQ
        qs = grid % nQ
        fb = B.algebra.tables[f][tuple(bs)]
        tq = T.tables[f][tuple(qs)]
        fq = Q.tables[f][tuple(qs)]
        tables[f] = (B.add[fb, tq] * nQ + fq).reshape((N,) * ar)
    labels = [f"<{B.algebra.label(b)},{Q.label(q)}>" for b in range(nB) for q in range(nQ)]
    C = FiniteAlgebra(Q.signature, N, tables, labels, name=f"{B.name}(x){Q.name}")
    return C, Homomorphism(C, Q, np.arange(N) % nQ)


# --- central extensions -----------------------------------------------------------------------

class CentralExtension:
    """pi: A -> Q surjective with central kernel alpha and kernel algebra B."""

    def __init__(self, A, Q, pi: Homomorphism, V: VarietySpec, budget=DEFAULT_BUDGET, check=True):
        if not pi.is_surjective():
            from .errors import NotSurjective
            raise NotSurjective("extension map is not surjective")
        if check and not pi.is_homomorphism():
            raise VerificationFailed("extension map is not a homomorphism")
        self.A, self.Q, self.pi, self.V = A, Q, pi, V
        self.alpha = Congruence(A, pi.map, verified=True)
        self.kernel = kernel_algebra(A, self.alpha, V, budget=budget)

    @classmethod
    def from_congruence(cls, A, alpha, V, budget=DEFAULT_BUDGET):
        Q, nat = quotient(A, alpha)
        return cls(A, Q, nat, V, budget)

    def default_section(self):
        l = np.empty(self.Q.size, dtype=np.int64)
        for a in range(self.A.size - 1, -1, -1):
            l[self.pi.map[a]] = a
        return l

    def sections(self):
        """Every section of pi, in lexicographic order."""
        fibres = [np.nonzero(self.pi.map == q)[0].tolist() for q in range(self.Q.size)]
        for choice in itertools.product(*fibres):
            yield np.array(choice, dtype=np.int64)


@dataclass
class Lifting:
    section: np.ndarray           # l: Q -> A
    pi: Homomorphism

    def __post_init__(self):
        self.section = np.asarray(self.section, dtype=np.int64)
        if not (self.pi.map[self.section] == np.arange(self.pi.codomain.size)).all():
            raise NotASection("l is not a section of pi")

    @property
    def trace(self):
        return self.section[self.pi.map]


def extract_cocycle(ext: CentralExtension, l=None, verify=True):
    """T_f(x) = [l(f^Q x); f^A(l x)]/Delta and the isomorphism psi onto B (x)^T Q.

    Returns (T, psi) where psi is an array A -> B x Q indices."""
    if l is None:
        l = ext.default_section()
    lift = l if isinstance(l, Lifting) else Lifting(np.asarray(l), ext.pi)
    sec = lift.section
    A, Q, K = ext.A, ext.Q, ext.kernel
    tables = {}
    for f, ar in Q.signature.symbols:
        if ar == 0:
            tables[f] = np.array(K.class_index[sec[Q.tables[f][()]], A.tables[f][()]])
            continue
        grid = np.indices((Q.size,) * ar)
        top = sec[Q.tables[f]]
        bottom = A.tables[f][tuple(sec[g] for g in grid)]
        tables[f] = K.class_index[top, bottom]
    T = Cocycle(Q, K, tables)
    pi = ext.pi.map
    b = K.class_index[sec[pi], np.arange(A.size)]
    psi = b * Q.size + pi
    if verify:
        C, _ = basic_construction(K, Q, T)
        if len(np.unique(psi)) != A.size or not is_homomorphism(A, C, psi):
            raise VerificationFailed("psi is not an isomorphism onto the basic construction")
    return T, psi


def coboundary_from_witness(h, Q: FiniteAlgebra, B: KernelAlgebra) -> Cocycle:
    """G_f(x) = f^B(h(x1),..,h(xn)) - h(f^Q(x))."""
    h = np.asarray(h, dtype=np.int64)
    tables = {}
    for f, ar in Q.signature.symbols:
        if ar == 0:
            tables[f] = np.array(B.minus(B.algebra.tables[f][()], h[Q.tables[f][()]]))
            continue
        grid = np.indices((Q.size,) * ar)
        fb = B.algebra.tables[f][tuple(h[g] for g in grid)]
        tables[f] = B.add[fb, B.neg[h[Q.tables[f]]]]
    return Cocycle(Q, B, tables)


def derivations(Q: FiniteAlgebra, B: KernelAlgebra, limit=1_000_000) -> list:
    """Homomorphisms Q -> B (the maps h with G_h = 0)."""
    return enumerate_homs(Q, B.algebra, limit=limit)


def stabilizing_automorphism(B: KernelAlgebra, Q: FiniteAlgebra, T: Cocycle, d, V: VarietySpec):
    """gamma(b, q) = (b + d(q), q) on B (x)^T Q; verified to be a stabilizing automorphism.

    Returns (gamma as array, report dict)."""
    d = np.asarray(d.map if hasattr(d, "map") else d, dtype=np.int64)
    C, p = basic_construction(B, Q, T)
    nQ = Q.size
    idx = np.arange(C.size)
    b, q = idx // nQ, idx % nQ
    gamma = B.add[b, d[q]] * nQ + q
    report = {}
    report["automorphism"] = bool(is_homomorphism(C, C, gamma) and len(np.unique(gamma)) == C.size)
    report["fixes_base"] = bool((gamma % nQ == q).all())
    # gamma = m(gamma o r, r, id) with trace r(b, q) = (0, q)
    mt = term_operation(V.difference_term, C, list(V.diff_vars))
    r = B.zero * nQ + q
    report["stabilizing"] = bool((mt[gamma[r], r, idx] == gamma).all())
    report["ok"] = all(report.values())
    return gamma, report


def idempotent_ideal_iso(A, alpha, u, V: VarietySpec, K: KernelAlgebra | None = None):
    """[a;b]/Delta -> m(a, b, u), an isomorphism onto the alpha-class of u.

    Returns (Homomorphism K.algebra -> I_alpha, inclusion of I_alpha in A)."""
    from .algebra import subalgebra_generated
    if not A.is_idempotent(u):
        raise NotIdempotent(f"{u} is not idempotent")
    if K is None:
        K = kernel_algebra(A, alpha, V)
    mt = term_operation(V.difference_term, A, list(V.diff_vars))
    P = K.pair_algebra
    vals = mt[P.pairs[:, 0], P.pairs[:, 1], u]
    cls = K.delta.labels
    img = np.full(K.size, -1, dtype=np.int64)
    for c, v in zip(cls.tolist(), vals.tolist()):
        if img[c] >= 0 and img[c] != v:
            raise VerificationFailed("map is not constant on Delta classes")
        img[c] = v
    block = alpha.block_of(u)
    I, inc = subalgebra_generated(A, block)
    if sorted(inc.tolist()) != sorted(block):
        raise VerificationFailed("alpha-class of u is not a subalgebra")
    pos = {int(a): i for i, a in enumerate(inc)}
    mp = np.array([pos.get(int(v), -1) for v in img])
    if (mp < 0).any():
        raise VerificationFailed("image leaves the alpha-class of u")
    h = Homomorphism(K.algebra, I, mp)
    if not (h.is_homomorphism() and h.is_injective() and h.is_surjective()):
        raise VerificationFailed("idempotent-ideal map is not an isomorphism")
    return h, inc


def split_sequence_check(A, alpha, V: VarietySpec, search_split=False, budget=DEFAULT_BUDGET) -> dict:
    """The sequence kappa(A(alpha ∧ [1,1])) -> A(alpha)/Delta -> (A/[1,1])(beta)/Delta."""
    full = one(A)
    d = tc_commutator(A, full, full, budget)
    mu = meet(alpha, d)
    K = kernel_algebra(A, alpha, V, budget=budget)
    Ad, nat = quotient(A, d)
    from .congruence import image_congruence
    beta = image_congruence(join(alpha, d), nat, Ad)
    K2 = kernel_algebra(Ad, beta, V, budget=budget)
    P = K.pair_algebra
    xi = np.full(K.size, -1, dtype=np.int64)
    ok_def = True
    for (a, b), c in zip(P.pairs.tolist(), K.delta.labels.tolist()):
        v = int(K2.class_index[nat.map[a], nat.map[b]])
        if xi[c] >= 0 and xi[c] != v:
            ok_def = False
        xi[c] = v
    xi_h = Homomorphism(K.algebra, K2.algebra, xi)
    kernel_elems = sorted(set(int(K.class_index[a, b]) for a, b in mu.pairs()))
    xi_kernel = sorted(np.nonzero(xi == K2.zero)[0].tolist())
    rep = {
        "well_defined": ok_def,
        "homomorphism": bool(ok_def and xi_h.is_homomorphism()),
        "surjective": bool(xi_h.is_surjective()),
        "kernel_matches": kernel_elems == xi_kernel,
        "size_kernel_algebra": K.size,
        "size_multiplier_part": len(kernel_elems),
        "size_image": K2.size,
    }
    rep["count_ok"] = K.size == len(kernel_elems) * K2.size
    rep["exact"] = all(rep[k] for k in ("well_defined", "homomorphism", "surjective", "kernel_matches"))
    if search_split:
        chi = find_splitting(K, K2, xi)
        rep["split_found"] = chi is not None
        rep["splitting"] = chi
    rep["xi"] = xi
    rep["K"] = K
    rep["K2"] = K2
    rep["kernel_elements"] = kernel_elems
    return rep


def find_splitting(K: KernelAlgebra, K2: KernelAlgebra, xi, limit=1_000_000):
    """A zero-preserving homomorphism chi: K2 -> K with xi o chi = id, or None."""
    xi = np.asarray(xi)
    gens = generating_set(K2.algebra)
    fixed = {}
    choices = []
    for g in gens:
        choices.append(np.nonzero(xi == g)[0].tolist())
    for pick in itertools.product(*choices):
        fixed = dict(zip(gens, pick))
        homs = enumerate_homs(K2.algebra, K.algebra, zero_preserving=True, zeros=(K2.zero, K.zero),
                              fixed=fixed, gens=gens, limit=limit)
        for h in homs:
            if (xi[h.map] == np.arange(K2.size)).all():
                return h
    return None
