"""Smith normal form over Z/eZ and finite abelian subquotients of (Z/e)^n.

Every finite abelian group handled here has exponent dividing e, so all
lattices contain e*Z^n and can be reduced mod e.  That keeps entries below
e and lets row and column operations run as vectorised numpy updates.
"""
from __future__ import annotations

from functools import reduce
from math import gcd

import numpy as np


def _egcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class SNF:
    """P @ A @ Q = D (mod e) with P, Q invertible mod e.  diag holds D[t,t]."""

    def __init__(self, diag, rank, P, Q, Qinv, e, shape):
        self.diag = diag
        self.rank = rank
        self.P, self.Q, self.Qinv = P, Q, Qinv
        self.e = e
        self.shape = shape

    def orders(self):
        """gcd(D_tt, e) for t < rank."""
        return [gcd(int(d), self.e) for d in self.diag]


def snf_mod(M, e, want_P=False, want_Q=False, want_Qinv=False) -> SNF:
    e = int(e)
    A = np.array(M, dtype=np.int64).reshape(len(M), -1) % e if len(M) else np.zeros((0, 0), np.int64)
    if A.ndim != 2:
        A = A.reshape(A.shape[0], -1)
    p, q = A.shape
    P = np.eye(p, dtype=np.int64) if want_P else None
    Q = np.eye(q, dtype=np.int64) if want_Q else None
    Qi = np.eye(q, dtype=np.int64) if want_Qinv else None
    diag = []
    t = 0
    while t < min(p, q):
        sub = A[t:, t:]
        nz = sub != 0
        if not nz.any():
            break
        g = np.where(nz, np.gcd(sub, e), e)
        i, j = np.unravel_index(int(np.argmin(g)), g.shape)
        i += t
        j += t
        if i != t:
            A[[t, i]] = A[[i, t]]
            if P is not None:
                P[[t, i]] = P[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if Q is not None:
                Q[:, [t, j]] = Q[:, [j, t]]
            if Qi is not None:
                Qi[[t, j]] = Qi[[j, t]]
        while True:
            a = int(A[t, t])
            ga = gcd(a, e)
            col = A[t + 1:, t]
            bad = np.nonzero(col % ga)[0]
            if len(bad):
                i = t + 1 + int(bad[0])
                b = int(A[i, t])
                g, s, u = _egcd(a, b)
                rt, ri = A[t].copy(), A[i].copy()
                A[t] = (s * rt + u * ri) % e
                A[i] = ((-b // g) * rt + (a // g) * ri) % e
                if P is not None:
                    pt, pi = P[t].copy(), P[i].copy()
                    P[t] = (s * pt + u * pi) % e
                    P[i] = ((-b // g) * pt + (a // g) * pi) % e
                continue
            inv = pow(a // ga, -1, e // ga) if e // ga > 1 else 0
            if col.any():
                c = ((col // ga) * inv) % e
                A[t + 1:] = (A[t + 1:] - c[:, None] * A[t][None, :]) % e
                if P is not None:
                    P[t + 1:] = (P[t + 1:] - c[:, None] * P[t][None, :]) % e
            row = A[t, t + 1:]
            bad = np.nonzero(row % ga)[0]
            if len(bad):
                j = t + 1 + int(bad[0])
                b = int(A[t, j])
                g, s, u = _egcd(a, b)
                ct, cj = A[:, t].copy(), A[:, j].copy()
                A[:, t] = (s * ct + u * cj) % e
                A[:, j] = ((-b // g) * ct + (a // g) * cj) % e
                if Q is not None:
                    qt, qj = Q[:, t].copy(), Q[:, j].copy()
                    Q[:, t] = (s * qt + u * qj) % e
                    Q[:, j] = ((-b // g) * qt + (a // g) * qj) % e
                if Qi is not None:
                    it, ij = Qi[t].copy(), Qi[j].copy()
                    Qi[t] = ((a // g) * it + (b // g) * ij) % e
                    Qi[j] = (-u * it + s * ij) % e
                continue
            if row.any():
                c = ((row // ga) * inv) % e
                A[:, t + 1:] = (A[:, t + 1:] - A[:, t][:, None] * c[None, :]) % e
                if Q is not None:
                    Q[:, t + 1:] = (Q[:, t + 1:] - Q[:, t][:, None] * c[None, :]) % e
                if Qi is not None:
                    Qi[t] = (Qi[t] + c @ Qi[t + 1:]) % e
            break
        diag.append(int(A[t, t]))
        t += 1
    return SNF(diag, len(diag), P, Q, Qi, e, (p, q))


def kernel_mod(M, e):
    """Generators (rows) of {x in (Z/e)^q : M x = 0 mod e}."""
    M = np.asarray(M, dtype=np.int64)
    q = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(q, dtype=np.int64)
    s = snf_mod(M, e, want_Q=True)
    gens = []
    for t in range(q):
        if t < s.rank:
            g = gcd(s.diag[t], e)
            if g == 1:
                continue
            gens.append((s.Q[:, t] * (e // g)) % e)
        else:
            gens.append(s.Q[:, t] % e)
    if not gens:
        return np.zeros((0, q), dtype=np.int64)
    return np.array(gens, dtype=np.int64)


def as_rows(X, n):
    """X as an integer matrix with n columns; copes with n = 0."""
    X = np.asarray(X, dtype=np.int64)
    if n == 0:
        return np.zeros((X.shape[0] if X.ndim == 2 else int(X.ndim == 1), 0), dtype=np.int64)
    return X.reshape(-1, n)


def invariant_factors(orders) -> list:
    """Invariant factors d1 | d2 | ... of the group prod Z_{o}."""
    primes = {}
    for o in orders:
        o = int(o)
        p = 2
        while o > 1:
            if o % p == 0:
                k = 0
                while o % p == 0:
                    o //= p
                    k += 1
                primes.setdefault(p, []).append(p ** k)
            p += 1
    if not primes:
        return []
    length = max(len(v) for v in primes.values())
    out = [1] * length
    for p, pows in primes.items():
        pows = sorted(pows)
        pows = [1] * (length - len(pows)) + pows
        out = [a * b for a, b in zip(out, pows)]
    return out


def group_order(factors) -> int:
    return reduce(lambda a, b: a * b, factors, 1)


class Subquotient:
    """The group <gens + rels> / <rels> inside (Z/e)^n.

    ``gens`` and ``rels`` are integer row matrices.  Builds a basis
    b_t of independent cyclic summands with explicit lifts in the ambient
    space, and a coordinate map for arbitrary ambient vectors."""

    def __init__(self, gens, rels, e, n):
        self.e = e = int(e)
        self.n = n
        gens = as_rows(gens, n) % e
        rels = as_rows(rels, n) % e
        self.rels = rels
        # ambient quotient (Z/e)^n / <rels>
        s = snf_mod(rels, e, want_Q=True) if len(rels) else None
        mods = []
        for t in range(n):
            if s is not None and t < s.rank:
                mods.append(gcd(s.diag[t], e))
            else:
                mods.append(e)
        self._Qamb = s.Q if s is not None else np.eye(n, dtype=np.int64)
        self._keep = np.array([t for t in range(n) if mods[t] > 1], dtype=np.int64)
        self._mods = np.array([mods[t] for t in self._keep], dtype=np.int64)
        self._scale = e // self._mods if len(self._mods) else self._mods
        # subgroup generated by gens inside the quotient, in scaled coordinates
        Y = self._scaled(gens)
        r = len(self._keep)
        if len(gens) == 0 or r == 0:
            self.basis_lifts = np.zeros((0, n), dtype=np.int64)
            self.orders = []
            self._Q2 = np.eye(r, dtype=np.int64)
            self._D = []
            self._combos = np.zeros((0, len(gens)), dtype=np.int64)
            self._basis_idx = []
            return
        s2 = snf_mod(Y, e, want_P=True, want_Q=True)
        self._Q2 = s2.Q
        self._combos = s2.P[:s2.rank] % e
        lifts, orders, D = [], [], []
        for t in range(s2.rank):
            g = gcd(s2.diag[t], e)
            D.append(s2.diag[t])
            orders.append(e // g)
            lifts.append((s2.P[t] @ gens) % e)
        self._D = D
        self._all_lifts = as_rows(np.array(lifts, dtype=np.int64), n)
        self._all_orders = orders
        keep = [t for t in range(len(orders)) if orders[t] > 1]
        self._basis_idx = keep
        self.basis_lifts = self._all_lifts[keep] if keep else np.zeros((0, n), dtype=np.int64)
        self.orders = [orders[t] for t in keep]

    def _scaled(self, X):
        X = as_rows(X, self.n)
        y = (X @ self._Qamb) % self.e
        if len(self._keep) == 0:
            return np.zeros((len(X), 0), dtype=np.int64)
        y = y[:, self._keep] % self._mods
        return (y * self._scale) % self.e

    @property
    def order(self):
        return group_order(self.orders)

    @property
    def invariant_factors(self):
        return invariant_factors(self.orders)

    def is_trivial(self, x) -> bool:
        """Whether the ambient vector x lies in <rels>."""
        return not self._scaled(x).any()

    def coords(self, x):
        """Coordinates (tuple, one per basis element) of x, or None if x is
        not in the subgroup."""
        y = self._scaled(x)[0]
        if len(self._D) == 0:
            return () if not y.any() else None
        z = (y @ self._Q2) % self.e
        out = []
        for t, d in enumerate(self._D):
            g = gcd(d, self.e)
            if z[t] % g:
                return None
            m = self.e // g
            c = ((z[t] // g) * pow(d // g, -1, m)) % m if m > 1 else 0
            out.append(c)
        if z[len(self._D):].any():
            return None
        return tuple(out[t] for t in self._basis_idx)

    def combination(self, x):
        """Weights w on the generator rows with w @ gens = x modulo rels,
        or None if x is not in the subgroup."""
        c = self.coords(x)
        if c is None:
            return None
        w = np.zeros(self._combos.shape[1], dtype=np.int64)
        for ct, t in zip(c, self._basis_idx):
            w = (w + int(ct) * self._combos[t]) % self.e
        return w

    def lift(self, coords):
        v = np.zeros(self.n, dtype=np.int64)
        for c, b in zip(coords, self.basis_lifts):
            v = (v + int(c) * b) % self.e
        return v

    def elements(self):
        """All coordinate tuples, in lexicographic order."""
        import itertools
        return list(itertools.product(*[range(o) for o in self.orders]))
