"""Signatures, terms and identities: parsing, printing and evaluation."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (ArityMismatch, DuplicateSymbol, MissingBinding,
                     ParseError, UnknownSymbol)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Signature:
    symbols: tuple  # ((name, arity), ...) in declaration order
    diff_symbol: str | None = None

    def __post_init__(self):
        seen = set()
        for name, ar in self.symbols:
            if name in seen:
                raise DuplicateSymbol(f"duplicate symbol {name!r}")
            if ar < 0:
                raise ParseError(f"negative arity for {name!r}")
            seen.add(name)
        if self.diff_symbol is not None and self.arity(self.diff_symbol) != 3:
            raise ArityMismatch(f"difference-term symbol {self.diff_symbol!r} must be ternary")

    @property
    def names(self):
        return [n for n, _ in self.symbols]

    def arity(self, name):
        for n, a in self.symbols:
            if n == name:
                return a
        raise UnknownSymbol(f"unknown symbol {name!r}")

    def __contains__(self, name):
        return any(n == name for n, _ in self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def as_dict(self):
        return dict(self.symbols)

    def __str__(self):
        return ", ".join(f"{n}/{a}" for n, a in self.symbols)


class Term:
    __slots__ = ()

    def variables(self) -> list:
        out: list = []
        _collect_vars(self, out)
        return out

    def size(self) -> int:
        if isinstance(self, Var):
            return 1
        return 1 + sum(c.size() for c in self.args)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App(Term):
    symbol: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(str(a) for a in self.args)})"


def _collect_vars(t, out):
    if isinstance(t, Var):
        if t.name not in out:
            out.append(t.name)
    else:
        for a in t.args:
            _collect_vars(a, out)


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    variables: tuple = ()

    def __post_init__(self):
        vs = list(self.variables)
        for v in self.lhs.variables() + self.rhs.variables():
            if v not in vs:
                if self.variables:
                    raise ParseError(f"variable {v!r} not declared for identity")
                vs.append(v)
        object.__setattr__(self, "variables", tuple(vs))

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class VarietySpec:
    signature: Signature
    axioms: tuple
    difference_term: Term
    diff_vars: tuple = ("x", "y", "z")
    name: str = ""

    def __post_init__(self):
        check_term(self.difference_term, self.signature)
        for v in self.difference_term.variables():
            if v not in self.diff_vars:
                raise ParseError(f"difference term uses undeclared variable {v!r}")
        for ax in self.axioms:
            check_term(ax.lhs, self.signature)
            check_term(ax.rhs, self.signature)


# --- tokenizer ---------------------------------------------------------------

def _tokens(text):
    line, col, i = 1, 1, 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            yield ("id", m.group(), line, col)
            col += m.end() - i
            i = m.end()
            continue
        if c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            yield ("num", text[i:j], line, col)
            col += j - i
            i = j
            continue
        if c in "(),/=":
            yield (c, c, line, col)
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    yield ("eof", "", line, col)


class _Stream:
    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, got {t[1]!r}", t[2], t[3])
        return t


def parse_signature(text: str, diff_symbol=None) -> Signature:
    s = _Stream(text)
    syms = []
    seen = set()
    if s.peek()[0] == "eof":
        return Signature(())
    while True:
        name = s.expect("id")
        s.expect("/")
        ar = s.expect("num")
        if name[1] in seen:
            raise DuplicateSymbol(f"duplicate symbol {name[1]!r}", name[2], name[3])
        seen.add(name[1])
        syms.append((name[1], int(ar[1])))
        t = s.next()
        if t[0] == "eof":
            break
        if t[0] != ",":
            raise ParseError(f"expected ',' got {t[1]!r}", t[2], t[3])
    return Signature(tuple(syms), diff_symbol)


def _parse_term(s: _Stream, sig: Signature):
    tok = s.expect("id")
    name, line, col = tok[1], tok[2], tok[3]
    if s.peek()[0] == "(":
        s.next()
        args = []
        if s.peek()[0] == ")":
            s.next()
        else:
            while True:
                args.append(_parse_term(s, sig))
                t = s.next()
                if t[0] == ")":
                    break
                if t[0] != ",":
                    raise ParseError(f"expected ',' or ')', got {t[1]!r}", t[2], t[3])
        if name not in sig:
            raise UnknownSymbol(f"unknown symbol {name!r}", line, col)
        if sig.arity(name) != len(args):
            raise ArityMismatch(
                f"{name} expects {sig.arity(name)} arguments, got {len(args)}", line, col)
        return App(name, tuple(args))
    if name in sig:
        if sig.arity(name) != 0:
            raise ArityMismatch(f"{name} expects {sig.arity(name)} arguments, got 0", line, col)
        return App(name, ())
    return Var(name)


def parse_term(text: str, sig: Signature, variables: Iterable[str] | None = None) -> Term:
    s = _Stream(text)
    t = _parse_term(s, sig)
    end = s.next()
    if end[0] != "eof":
        raise ParseError(f"trailing input {end[1]!r}", end[2], end[3])
    if variables is not None:
        allowed = set(variables)
        for v in t.variables():
            if v not in allowed:
                raise ParseError(f"undeclared variable {v!r}")
    return t


def parse_identity(text: str, sig: Signature) -> Identity:
    s = _Stream(text)
    lhs = _parse_term(s, sig)
    s.expect("=")
    rhs = _parse_term(s, sig)
    end = s.next()
    if end[0] != "eof":
        raise ParseError(f"trailing input {end[1]!r}", end[2], end[3])
    return Identity(lhs, rhs)


def check_term(t: Term, sig: Signature):
    if isinstance(t, Var):
        if t.name in sig:
            raise ParseError(f"variable {t.name!r} collides with a symbol")
        return
    if t.symbol not in sig:
        raise UnknownSymbol(f"unknown symbol {t.symbol!r}")
    if sig.arity(t.symbol) != len(t.args):
        raise ArityMismatch(f"{t.symbol} expects {sig.arity(t.symbol)} arguments")
    for a in t.args:
        check_term(a, sig)


# --- evaluation ---------------------------------------------------------------

def eval_term(t: Term, A, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return int(env[t.name])
        except KeyError:
            raise MissingBinding(f"no binding for variable {t.name!r}") from None
    vals = tuple(eval_term(a, A, env) for a in t.args)
    return int(A.tables[t.symbol][vals])


def eval_term_vec(t: Term, A, env: Mapping[str, np.ndarray]) -> np.ndarray:
    """Evaluate t on arrays of assignments (broadcasting over env arrays)."""
    if isinstance(t, Var):
        try:
            return np.asarray(env[t.name])
        except KeyError:
            raise MissingBinding(f"no binding for variable {t.name!r}") from None
    tab = A.tables[t.symbol]
    if not t.args:
        return np.asarray(tab)
    args = [eval_term_vec(a, A, env) for a in t.args]
    args = np.broadcast_arrays(*args)
    return tab[tuple(args)]


def term_operation(t: Term, A, var_order: Sequence[str]) -> np.ndarray:
    """Full table of t over A^k, axis i indexed by var_order[i]."""
    k = len(var_order)
    n = A.size
    for v in t.variables():
        if v not in var_order:
            raise MissingBinding(f"variable {v!r} not in var_order")
    env = {}
    for i, v in enumerate(var_order):
        shape = [1] * k
        shape[i] = n
        env[v] = np.arange(n).reshape(shape)
    out = eval_term_vec(t, A, env)
    return np.broadcast_to(out, (n,) * k).copy()


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return App(t.symbol, tuple(substitute(a, mapping) for a in t.args))


def rename(t: Term, mapping: Mapping[str, str]) -> Term:
    return substitute(t, {k: Var(v) for k, v in mapping.items()})
