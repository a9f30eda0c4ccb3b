"""Text formats: algebra files, variety files, cocycle files and key=value reports."""
from __future__ import annotations

import hashlib
import re
import time
from pathlib import Path

import numpy as np

from .algebra import FiniteAlgebra
from .congruence import Congruence, cg, parse_partition
from .errors import ParseError
from .termlang import (App, Signature, Var, VarietySpec, parse_identity, parse_signature,
                       parse_term)

# --- algebras ----------------------------------------------------------------------

def _strip(line):
    return line.split("#", 1)[0].strip()


def parse_algebra(text: str) -> FiniteAlgebra:
    """Parse the algebra text format::

        algebra Z2
        signature: mul/2, inv/1, e/0
        size 2
        labels: 0 1          (optional)
        op mul:
        0 1
        1 0
        ...
    """
    name, sig, size, labels = "", None, None, None
    tables, cur, buf = {}, None, []

    def flush():
        if cur is None:
            return
        ar = sig.arity(cur)
        want = size ** ar
        if len(buf) != want:
            raise ParseError(f"op {cur}: expected {want} entries, got {len(buf)}")
        tab = np.array(buf, dtype=np.int64).reshape((size,) * ar)
        if want and (tab.min() < 0 or tab.max() >= size):
            raise ParseError(f"op {cur}: entry out of range")
        tables[cur] = tab

    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("algebra"):
            name = line[len("algebra"):].strip()
        elif line.startswith("signature:"):
            sig = parse_signature(line.split(":", 1)[1])
        elif line.startswith("size"):
            size = int(line.split()[1])
        elif line.startswith("labels:"):
            labels = line.split(":", 1)[1].split()
        elif line.startswith("op "):
            if sig is None or size is None:
                raise ParseError("signature and size must precede tables", ln)
            flush()
            cur = line[3:].rstrip(":").strip()
            if cur not in sig:
                raise ParseError(f"unknown operation {cur!r}", ln)
            buf = []
        else:
            if cur is None:
                raise ParseError(f"unexpected line {line!r}", ln)
            try:
                buf.extend(int(x) for x in line.split())
            except ValueError:
                raise ParseError(f"bad table entry in {line!r}", ln) from None
    flush()
    if sig is None or size is None:
        raise ParseError("missing signature or size")
    missing = [f for f in sig.names if f not in tables]
    if missing:
        raise ParseError(f"missing tables for {missing}")
    return FiniteAlgebra(sig, size, tables, labels, name=name)


def format_algebra(A: FiniteAlgebra) -> str:
    out = [f"algebra {A.name or 'A'}", f"signature: {A.signature}", f"size {A.size}"]
    labels = [A.label(x) for x in range(A.size)]
    if labels != [str(x) for x in range(A.size)] and all(" " not in l for l in labels):
        out.append("labels: " + " ".join(labels))
    for f, ar in A.signature.symbols:
        out.append(f"op {f}:")
        t = np.asarray(A.tables[f])
        if ar == 0:
            out.append(str(int(t)))
        else:
            for row in t.reshape(-1, A.size):
                out.append(" ".join(str(int(x)) for x in row))
    return "\n".join(out) + "\n"


# --- varieties ---------------------------------------------------------------------

def parse_variety(text: str, name="") -> VarietySpec:
    """signature line, ``axioms:`` followed by one identity per line, and either
    ``difference_term: m(x,y,z) = <term>`` or ``difference_term_symbol: m``."""
    sig, axioms, dterm, dsym = None, [], None, None
    in_axioms = False
    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        low = line.lower()
        if low.startswith("signature:"):
            sig = parse_signature(line.split(":", 1)[1])
            in_axioms = False
        elif low.startswith("name:"):
            name = line.split(":", 1)[1].strip()
        elif low.startswith("axioms:"):
            in_axioms = True
            rest = line.split(":", 1)[1].strip()
            if rest:
                axioms.append(rest)
        elif low.startswith("difference_term_symbol:"):
            dsym = line.split(":", 1)[1].strip()
            in_axioms = False
        elif low.startswith("difference_term:"):
            dterm = line.split(":", 1)[1].strip()
            in_axioms = False
        elif in_axioms:
            axioms.append(line)
        else:
            raise ParseError(f"unexpected line {line!r}", ln)
    if sig is None:
        raise ParseError("variety file needs a signature line")
    ids = tuple(parse_identity(a, sig) for a in axioms)
    if dsym is not None:
        if sig.arity(dsym) != 3:
            raise ParseError(f"difference term symbol {dsym!r} must be ternary")
        m = App(dsym, (Var("x"), Var("y"), Var("z")))
        return VarietySpec(sig, ids, m, ("x", "y", "z"), name=name)
    if dterm is None:
        raise ParseError("variety file needs difference_term or difference_term_symbol")
    head, _, body = dterm.partition("=")
    mh = re.fullmatch(r"\s*\w+\s*\(\s*(\w+)\s*,\s*(\w+)\s*,\s*(\w+)\s*\)\s*", head)
    if not body or not mh:
        raise ParseError("difference_term must read m(x,y,z) = <term>")
    vs = mh.groups()
    return VarietySpec(sig, ids, parse_term(body, sig, vs), tuple(vs), name=name)


def format_variety(V: VarietySpec) -> str:
    out = [f"name: {V.name}"] if V.name else []
    out.append(f"signature: {V.signature}")
    out.append("axioms:")
    out.extend(f"  {ax}" for ax in V.axioms)
    x, y, z = V.diff_vars
    out.append(f"difference_term: m({x},{y},{z}) = {V.difference_term}")
    return "\n".join(out) + "\n"


# --- cocycles ----------------------------------------------------------------------

def format_cocycle(T) -> str:
    out = [f"# cocycle over {T.Q.name or 'Q'} with values in {T.B.name or 'B'}"]
    for f, ar in T.Q.signature.symbols:
        out.append(f"cocycle {f}:")
        t = np.asarray(T.tables[f])
        if ar == 0:
            out.append(str(int(t)))
        else:
            for row in t.reshape(-1, T.Q.size):
                out.append(" ".join(str(int(x)) for x in row))
    return "\n".join(out) + "\n"


def parse_cocycle(text: str, Q: FiniteAlgebra, B) -> dict:
    tables, cur, buf = {}, None, []

    def flush():
        if cur is not None:
            ar = Q.signature.arity(cur)
            if len(buf) != Q.size ** ar:
                raise ParseError(f"cocycle {cur}: expected {Q.size ** ar} entries")
            tables[cur] = np.array(buf, dtype=np.int64).reshape((Q.size,) * ar)

    for raw in text.splitlines():
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("cocycle "):
            flush()
            cur, buf = line[len("cocycle "):].rstrip(":").strip(), []
            if cur not in Q.signature:
                raise ParseError(f"unknown operation {cur!r}")
        else:
            buf.extend(int(x) for x in line.split())
    flush()
    return tables


# --- partitions and congruence arguments --------------------------------------------

def congruence_arg(A: FiniteAlgebra, text: str) -> Congruence:
    """``full``/``one``, ``zero``, a partition like ``0,2|1,3``, or generating
    pairs ``cg:0-2,1-3``."""
    t = text.strip()
    if t in ("full", "one", "1"):
        return Congruence.one_of(A)
    if t in ("zero", "0"):
        return Congruence.zero_of(A)
    if t.startswith("cg:"):
        pairs = []
        for item in t[3:].split(","):
            a, b = item.split("-")
            pairs.append((int(a), int(b)))
        return cg(A, pairs)
    return Congruence.from_partition(A, parse_partition(t, A.size), check=True)


# --- reports -----------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


class Report:
    """Ordered key=value lines with #-comments. Timings are kept apart so the
    default output is byte-identical across runs."""

    def __init__(self, command):
        self.command = command
        self.inputs = {}
        self.fields = {}
        self.comments = []
        self.timings = {}
        self._t0 = time.perf_counter()

    def add_input(self, label, path):
        data = Path(path).read_bytes() if Path(path).exists() else str(path).encode()
        self.inputs[label] = hashlib.sha256(data).hexdigest()[:16]

    def __setitem__(self, key, value):
        self.fields[key] = value

    def __getitem__(self, key):
        return self.fields[key]

    def update(self, d):
        for k, v in d.items():
            self.fields[k] = v

    def comment(self, text):
        self.comments.append(text)

    def lap(self, label):
        self.timings[label] = time.perf_counter() - self._t0

    def render(self, timings=False) -> str:
        out = [f"# centralext {self.command}"]
        out += [f"# input {k} sha256:{v}" for k, v in self.inputs.items()]
        out += [f"# {c}" for c in self.comments]
        out += [f"{k}={_fmt(v)}" for k, v in self.fields.items()]
        if timings:
            out += [f"# time {k} {v:.3f}s" for k, v in self.timings.items()]
        return "\n".join(out) + "\n"


def parse_report(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        k, v = line.split("=", 1)
        out[k] = v
    return out
