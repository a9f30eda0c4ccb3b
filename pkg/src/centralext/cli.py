"""Command-line front end: ``centralext <command> ...``.

Exit codes: 0 ok, 1 usage or input error, 2 hypothesis failed, 3 budget exceeded.
Algebra and variety arguments take a file path or a built-in name (see
``--help`` of each command)."""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import io, library, repro
from .algebra import satisfies, find_idempotents, presentation_of
from .closure import DEFAULT_BUDGET
from .errors import (BudgetExceeded, CentralExtError, HypothesisFailed, LimitExceeded,
                     NoIdempotent, NotIdempotent, ParseError)

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_BUDGET = 0, 1, 2, 3

BUILTIN_ALGEBRAS = "Z<n>, V4, S<n>, A<n>, D<n>, Q8, SL2"
BUILTIN_VARIETIES = "groups, abelian:<n>, s3, abelian-unary"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def load_algebra(spec: str):
    p = Path(spec)
    if p.exists():
        return io.parse_algebra(p.read_text())
    m = re.fullmatch(r"([A-Za-z]+)(\d*)", spec)
    if m:
        kind, num = m.group(1).upper(), m.group(2)
        k = int(num) if num else None
        makers = {"Z": library.cyclic_group, "S": library.symmetric_group,
                  "A": library.alternating_group, "D": library.dihedral_group}
        if kind in makers and k:
            return makers[kind](k)
        if spec.upper() == "V4":
            return library.klein_four()
        if spec.upper() == "Q8":
            return library.quaternion_group()
        if spec.upper() == "SL2":
            return library.semilattice2()
    raise UsageError(f"no such algebra file or built-in: {spec!r} (built-ins: {BUILTIN_ALGEBRAS})")


def load_variety(spec: str):
    p = Path(spec)
    if p.exists():
        return io.parse_variety(p.read_text(), name=p.stem)
    s = spec.lower()
    if s == "groups":
        return library.groups_variety()
    if s == "s3":
        return library.s3_variety()
    if s == "abelian-unary":
        return library.abelian_groups_with_unary()
    m = re.fullmatch(r"abelian:(\d+)", s)
    if m:
        return library.abelian_exponent_variety(int(m.group(1)))
    raise UsageError(f"no such variety file or built-in: {spec!r} (built-ins: {BUILTIN_VARIETIES})")


def _kernel(B, V):
    from .extension import KernelAlgebra
    return KernelAlgebra.from_algebra(B, V)


# --- commands ------------------------------------------------------------------------

def cmd_validate(a, rep):
    A = load_algebra(a.algebra)
    rep.add_input("algebra", a.algebra)
    rep["name"] = A.name
    rep["size"] = A.size
    rep["signature"] = str(A.signature)
    rep["idempotents"] = find_idempotents(A)
    if a.variety:
        V = load_variety(a.variety)
        rep.add_input("variety", a.variety)
        fails = []
        for ax in V.axioms:
            ok, wit = satisfies(A, ax, return_witness=True)
            if not ok:
                fails.append(f"{ax} at {wit}")
        rep["axioms"] = len(V.axioms)
        rep["in_variety"] = not fails
        for f in fails[:5]:
            rep.comment(f"fails: {f}")
        from .commutator import verify_difference_term
        dt = verify_difference_term(A, V.difference_term, V.diff_vars, budget=a.budget)
        rep["difference_term_ok"] = dt["ok"]


def cmd_con(a, rep):
    from .congruence import all_congruences
    A = load_algebra(a.algebra)
    rep.add_input("algebra", a.algebra)
    if a.cg:
        c = io.congruence_arg(A, "cg:" + a.cg)
        rep["congruence"] = c.text()
        return
    congs = all_congruences(A, limit=a.limit)
    rep["count"] = len(congs)
    for i, c in enumerate(congs):
        rep[f"con_{i}"] = c.text()


def cmd_comm(a, rep):
    from .commutator import tc_commutator
    A = load_algebra(a.algebra)
    rep.add_input("algebra", a.algebra)
    alpha = io.congruence_arg(A, a.alpha)
    beta = io.congruence_arg(A, a.beta)
    c, trace = tc_commutator(A, alpha, beta, budget=a.budget, return_trace=True)
    rep["alpha"] = alpha.text()
    rep["beta"] = beta.text()
    rep["commutator"] = c.text()
    rep["iterations"] = trace.iterations
    rep["matrix_size"] = trace.matrix_size


def cmd_center(a, rep):
    from .commutator import center
    A = load_algebra(a.algebra)
    rep.add_input("algebra", a.algebra)
    V = load_variety(a.variety) if a.variety else None
    z = center(A, V, budget=a.budget)
    rep["center"] = z.text()
    rep["blocks"] = z.num_blocks


def cmd_kernel(a, rep):
    from .extension import kernel_algebra
    A = load_algebra(a.algebra)
    V = load_variety(a.variety)
    rep.add_input("algebra", a.algebra)
    alpha = io.congruence_arg(A, a.alpha)
    K = kernel_algebra(A, alpha, V, budget=a.budget)
    rep["alpha"] = alpha.text()
    rep["kernel_size"] = K.size
    rep["invariant_factors"] = K.invariant_factors
    rep["zero"] = K.zero
    if a.out:
        Path(a.out).write_text(io.format_algebra(K.algebra))
        rep["written"] = a.out


def cmd_extend(a, rep):
    from .extension import (CentralExtension, Cocycle, basic_construction, extract_cocycle)
    from .algebra import is_homomorphism, is_isomorphic, satisfies_all
    V = load_variety(a.variety)
    if a.cocycle:
        if not (a.q and a.b):
            raise UsageError("extend --cocycle needs --q and --b")
        Q, B0 = load_algebra(a.q), load_algebra(a.b)
        B = _kernel(B0, V)
        T = Cocycle(Q, B, io.parse_cocycle(Path(a.cocycle).read_text(), Q, B))
        C, p2 = basic_construction(B, Q, T)
        rep["size"] = C.size
        rep["in_variety"] = satisfies_all(C, V.axioms)
        if a.out:
            Path(a.out).write_text(io.format_algebra(C))
            rep["written"] = a.out
        return
    if not (a.algebra and a.alpha):
        raise UsageError("extend needs either --cocycle (with --q, --b) or --algebra and --alpha")
    A = load_algebra(a.algebra)
    rep.add_input("algebra", a.algebra)
    alpha = io.congruence_arg(A, a.alpha)
    ext = CentralExtension.from_congruence(A, alpha, V, budget=a.budget)
    l = None
    if a.section:
        l = [int(x) for x in a.section.split(",")]
    T, psi = extract_cocycle(ext, l)
    C, _ = basic_construction(ext.kernel, ext.Q, T)
    rep["kernel_size"] = ext.kernel.size
    rep["quotient_size"] = ext.Q.size
    rep["psi_is_iso"] = bool(len(np.unique(psi)) == A.size and is_homomorphism(A, C, psi))
    rep["round_trip_isomorphic"] = is_isomorphic(C, A)
    for f, t in T.tables.items():
        rep[f"cocycle_{f}"] = np.asarray(t).ravel().tolist()
    if a.out:
        Path(a.out).write_text(io.format_cocycle(T))
        rep["written"] = a.out


def cmd_h2(a, rep):
    from .cohomology import h2
    Q, B0, V = load_algebra(a.q), load_algebra(a.b), load_variety(a.variety)
    rep.add_input("q", a.q)
    rep.add_input("b", a.b)
    B = _kernel(B0, V)
    H = h2(Q, B, V)
    rep["invariant_factors"] = H.invariant_factors
    rep["order"] = H.order
    rep["Z2_order"] = H.z2.order
    rep["B2_order"] = H.b2.order
    if a.reps:
        d = Path(a.reps)
        d.mkdir(parents=True, exist_ok=True)
        for i, T in enumerate(H.representatives()):
            (d / f"class_{i}.cocycle").write_text(io.format_cocycle(T))
        rep["representatives_written"] = H.order


def cmd_hs(a, rep):
    from .cohomology import hochschild_serre_check
    from .extension import CentralExtension
    A, V = load_algebra(a.algebra), load_variety(a.variety)
    rep.add_input("algebra", a.algebra)
    rep.add_input("e", a.e)
    alpha = io.congruence_arg(A, a.alpha)
    E = _kernel(load_algebra(a.e), V)
    ext = CentralExtension.from_congruence(A, alpha, V, budget=a.budget)
    pres = None
    if a.generator:
        pres = presentation_of(ext.Q, load_algebra(a.generator), a.k, budget=a.budget)
    r = hochschild_serre_check(ext, E, V, presentation=pres)
    rep.update({k: v for k, v in r.items() if not k.startswith("_")})


def _presentation(a):
    V = load_variety(a.variety)
    G = load_algebra(a.generator)
    Q = load_algebra(a.q)
    rep_inputs = (("variety", a.variety), ("generator", a.generator), ("q", a.q))
    return V, G, Q, presentation_of(Q, G, a.k, budget=a.budget), rep_inputs


def cmd_schur(a, rep):
    from .schur import schur_multiplier
    V, G, Q, p, ins = _presentation(a)
    for k, v in ins:
        rep.add_input(k, v)
    sm = schur_multiplier(p, V, budget=a.budget)
    rep["free_size"] = p.F.size
    rep["F_prime_size"] = sm.F_prime.size
    rep["kernel_algebra_size"] = sm.kernel.size
    rep["multiplier_order"] = sm.order
    rep["invariant_factors"] = sm.invariant_factors
    rep["idempotent"] = sm.idempotent is not None
    rep["ideal_iso_ok"] = sm.ideal_iso_ok
    if a.e:
        from .schur import schur_hopf_check
        r = schur_hopf_check(Q, _kernel(load_algebra(a.e), V), p, V, budget=a.budget)
        if r.get("hypothesis_failed"):
            raise HypothesisFailed("F/[theta,1] has no idempotent element")
        rep.update({f"hopf_{k}": v for k, v in r.items() if k != "hypothesis_failed"})


def cmd_cover(a, rep):
    from .schur import cover_construct
    V, G, Q, p, ins = _presentation(a)
    for k, v in ins:
        rep.add_input(k, v)
    cov = cover_construct(p, V, budget=a.budget)
    rep["cover_size"] = cov.algebra.size
    rep["multiplier_factors"] = cov.multiplier.invariant_factors
    rep.update(cov.certificates)
    if a.out:
        Path(a.out).write_text(io.format_algebra(cov.algebra))
        rep["written"] = a.out


def cmd_repro(a, rep):
    t = a.target
    if t == "sec4-example":
        try:
            r = repro.unary_counterexample(a.n, a.m, a.k)
        except ValueError as e:
            raise UsageError(str(e)) from None
    elif t == "hs-z4":
        r = repro.hs_z4()
    elif t == "commbase-random":
        r = repro.commbase_random(a.seed, a.count)
    elif t == "schur-invariance":
        r = repro.schur_invariance(a.instance)
    elif t == "idemideal":
        r = repro.idemideal()
    else:                               # argparse already restricts choices
        raise UsageError(f"unknown target {t}")
    rep.update(r)


# --- parser --------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="centralext", description="Central extensions and commutators of finite algebras.")
    p.add_argument("--timings", action="store_true", help="append timing comments to the report")
    p.add_argument("--report", help="also write the report to this file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="closure size budget")
        return sp

    alg_help = f"algebra file or built-in ({BUILTIN_ALGEBRAS})"
    var_help = f"variety file or built-in ({BUILTIN_VARIETIES})"
    con_help = "congruence: full, zero, a partition like 0,2|1,3, or cg:0-2,1-3"

    sp = add("validate", cmd_validate, "parse an algebra and check it against a variety")
    sp.add_argument("--algebra", required=True, help=alg_help)
    sp.add_argument("--variety", help=var_help)

    sp = add("con", cmd_con, "congruence lattice, or one principal/generated congruence")
    sp.add_argument("--algebra", required=True, help=alg_help)
    sp.add_argument("--cg", help="generating pairs a-b,c-d")
    sp.add_argument("--limit", type=int, default=100_000)

    sp = add("comm", cmd_comm, "term condition commutator [alpha, beta]")
    sp.add_argument("--algebra", required=True, help=alg_help)
    sp.add_argument("--alpha", required=True, help=con_help)
    sp.add_argument("--beta", required=True, help=con_help)

    sp = add("center", cmd_center, "center congruence")
    sp.add_argument("--algebra", required=True, help=alg_help)
    sp.add_argument("--variety", help=var_help)

    sp = add("kernel", cmd_kernel, "kernel algebra A(alpha)/Delta of a central congruence")
    sp.add_argument("--algebra", required=True, help=alg_help)
    sp.add_argument("--alpha", required=True, help=con_help)
    sp.add_argument("--variety", required=True, help=var_help)
    sp.add_argument("--out", help="write the kernel algebra to this file")

    sp = add("extend", cmd_extend, "extract a cocycle from A/alpha, or build B (x)^T Q from a cocycle file")
    sp.add_argument("--variety", required=True, help=var_help)
    sp.add_argument("--algebra", help=alg_help)
    sp.add_argument("--alpha", help=con_help)
    sp.add_argument("--section", help="comma separated section values, one per alpha-block")
    sp.add_argument("--q", help=alg_help)
    sp.add_argument("--b", help=alg_help)
    sp.add_argument("--cocycle", help="cocycle file")
    sp.add_argument("--out", help="write the cocycle (or the built algebra) here")

    sp = add("h2", cmd_h2, "second cohomology H^2(Q, B)")
    sp.add_argument("--q", required=True, help=alg_help)
    sp.add_argument("--b", required=True, help=alg_help)
    sp.add_argument("--variety", required=True, help=var_help)
    sp.add_argument("--reps", help="directory for representative cocycle files")

    sp = add("hs", cmd_hs, "five-term sequence check for A -> A/alpha with coefficients E")
    sp.add_argument("--algebra", required=True, help=alg_help)
    sp.add_argument("--alpha", required=True, help=con_help)
    sp.add_argument("--e", required=True, help=alg_help)
    sp.add_argument("--variety", required=True, help=var_help)
    sp.add_argument("--generator", help="HSP generator, to test the presentation idempotent hypothesis")
    sp.add_argument("-k", type=int, default=1, help="generators of the presentation")

    for name, fn, h in (("schur", cmd_schur, "Schur multiplier from a free presentation"),
                        ("cover", cmd_cover, "cover construction from a free presentation")):
        sp = add(name, fn, h)
        sp.add_argument("--variety", required=True, help=var_help)
        sp.add_argument("--generator", required=True, help="algebra generating the variety")
        sp.add_argument("--q", required=True, help=alg_help)
        sp.add_argument("-k", type=int, default=1, help="number of free generators")
        if name == "schur":
            sp.add_argument("--e", help="coefficient algebra for the Schur-Hopf comparison")
        else:
            sp.add_argument("--out", help="write the cover algebra here")

    sp = add("repro", cmd_repro, "bundled reproduction runs")
    sp.add_argument("target", choices=repro.TARGETS)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--instance", choices=("z4", "d4"), default="z4")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:            # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    a.budget = int(a.budget)
    rep = io.Report(a.command if a.command != "repro" else f"repro {a.target}")
    code = EXIT_OK
    try:
        a.fn(a, rep)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisFailed, NoIdempotent, NotIdempotent) as e:
        rep["hypothesis_failed"] = True
        rep.comment(str(e))
        code = EXIT_HYPOTHESIS
    except (BudgetExceeded, LimitExceeded) as e:
        rep["budget_exceeded"] = True
        rep.comment(str(e))
        code = EXIT_BUDGET
    except CentralExtError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    rep.lap("total")
    text = rep.render(timings=a.timings)
    sys.stdout.write(text)
    if a.report:
        Path(a.report).write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
