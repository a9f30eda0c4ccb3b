"""The ten acceptance criteria. Each test records a verdict that is printed as
one PASS/FAIL line in the terminal summary, then asserts it."""
import time

import numpy as np
import pytest

from centralext import library as lib
from centralext.algebra import presentation_of
from centralext.cohomology import group_h2_bar, h2
from centralext.commutator import is_perfect, tc_commutator
from centralext.congruence import Congruence, cg
from centralext.extension import (CentralExtension, KernelAlgebra, basic_construction, extract_cocycle,
                                  idempotent_ideal_iso)
from centralext.repro import commbase_random, hs_z4, idemideal, schur_invariance, unary_counterexample
from centralext.schur import schur_hopf_check

from conftest import (ACCEPTANCE, commutator_subgroup, coset_labels, group_center, group_corpus,
                      normal_subgroups)


def record(n, checks, elapsed, limit):
    """checks: ordered (label, bool) pairs. The runtime bound is one more check."""
    checks = list(checks) + [(f"runtime {elapsed:.1f}s < {limit}s", elapsed < limit)]
    bad = [label for label, ok in checks if not ok]
    detail = "all checks hold" if not bad else "failed: " + "; ".join(bad)
    ACCEPTANCE[n] = (not bad, f"{detail} ({elapsed:.1f}s)")
    assert not bad, detail


def order_four_kind(C):
    mul, e = C.tables["mul"], int(C.tables["e"])
    for x in range(C.size):
        y, k = x, 1
        while y != e:
            y, k = int(mul[y, x]), k + 1
        if k == 4:
            return "Z4"
    return "V4"


def test_criterion_1_counterexample():
    t = time.perf_counter()
    checks = []
    for n, m, k in ((2, 3, 2), (2, 5, 3)):
        r = unary_counterexample(n, m, k)
        tag = f"({n},{m},{k})"
        checks += [
            (f"{tag} [S] != 0", r["S_nonzero"]),
            (f"{tag} Hom(B',E) = 0", r["hom_Bprime_E"] == 1),
            (f"{tag} im delta_T = 0", r["im_delta"] == "0"),
            (f"{tag} h(b,x)=b witnesses inflation([S]) = 0", r["witness_valid"]),
            (f"{tag} [S] in ker inflation", r["ker_sigma_contains_S"]),
            (f"{tag} exact_at_4 = false", r["exact_at_4"] is False),
        ]
    record(1, checks, time.perf_counter() - t, 30)


def test_criterion_2_hochschild_serre_z4():
    t = time.perf_counter()
    r = hs_z4()
    checks = [
        ("complex at all four composites", all(r[f"complex_{i}"] for i in range(1, 5))),
        ("exact at every position", r["exact_everywhere"]),
        ("orders 2,2,2,2,2", r["orders"] == [2, 2, 2, 2, 2]),
        ("orders match enumeration oracle", r["orders_match_oracle"]),
        ("idempotent present", r["A_has_idempotent"]),
    ]
    record(2, checks, time.perf_counter() - t, 60)


def test_criterion_3_h2_groups():
    t = time.perf_counter()
    V = lib.groups_variety()
    Z2 = lib.cyclic_group(2)
    B = KernelAlgebra.from_algebra(Z2, V)
    H = h2(Z2, B, V)
    kinds = sorted(order_four_kind(basic_construction(B, Z2, T)[0]) for T in H.representatives())
    HV = h2(lib.klein_four(), B, V)
    bar = group_h2_bar(lib.klein_four(), 2)[2]
    checks = [
        ("H2(Z2,Z2) factors [2]", H.invariant_factors == [2]),
        ("classes realize V4 and Z4", kinds == ["V4", "Z4"]),
        ("|H2(V4,Z2)| = 8", HV.order == 8),
        ("bar oracle agrees", bar == HV.order),
    ]
    record(3, checks, time.perf_counter() - t, 300)


def test_criterion_4_commutator_oracle():
    t = time.perf_counter()
    V = lib.groups_variety()
    total, agree = 0, 0
    for G in (lib.cyclic_group(4), lib.symmetric_group(3), lib.dihedral_group(4), lib.quaternion_group()):
        subs = normal_subgroups(G)
        for H in subs:
            for K in subs:
                aH = Congruence(G, coset_labels(G, H))
                aK = Congruence(G, coset_labels(G, K))
                want = Congruence(G, coset_labels(G, commutator_subgroup(G, H, K)))
                total += 1
                agree += tc_commutator(G, aH, aK) == want
    record(4, [(f"{agree}/{total} pairs agree", agree == total)], time.perf_counter() - t, 60)


def test_criterion_5_commbase():
    t = time.perf_counter()
    r = commbase_random(seed=0, count=100)
    checks = [
        (f"zero violations over {r['instances']} instances", r["violations"] == 0),
        (f"{r['nontrivial_instances']} instances with a nonzero left side", r["nontrivial_instances"] > 0),
    ]
    record(5, checks, time.perf_counter() - t, 120)


def test_criterion_6_idempotent_ideal():
    t = time.perf_counter()
    V = lib.groups_variety()
    r = idemideal()
    explicit = []
    D4 = lib.dihedral_group(4)
    Z = group_center(D4)
    Z4 = lib.cyclic_group(4)
    for A, alpha, u in ((Z4, cg(Z4, [(0, 2)]), 0),
                        (D4, Congruence(D4, coset_labels(D4, Z)), int(D4.tables["e"]))):
        h, inc = idempotent_ideal_iso(A, alpha, u, V)
        # table check: h is a bijection onto the class of u that respects every operation
        I = h.codomain
        ok = sorted(h.map.tolist()) == list(range(I.size))
        for f, ar in I.signature.symbols:
            src, dst = np.asarray(h.domain.tables[f]), np.asarray(I.tables[f])
            if ar == 0:
                ok &= h.map[int(src)] == int(dst)
            elif ar == 1:
                ok &= bool((h.map[src] == dst[h.map]).all())
            else:
                ok &= bool((h.map[src] == dst[np.ix_(h.map, h.map)]).all())
        explicit.append(bool(ok))
    checks = [
        ("Z4, Cg(0,2), u=0", r["z4_iso"] and explicit[0]),
        ("D4, center, u=e", r["d4_iso"] and explicit[1]),
    ]
    record(6, checks, time.perf_counter() - t, 10)


def test_criterion_7_round_trip():
    t = time.perf_counter()
    V = lib.groups_variety()
    cases, sections, failures = 0, 0, []
    for name, G in group_corpus().items():
        Z = group_center(G)
        for N in normal_subgroups(G):
            if not N <= Z:
                continue
            cases += 1
            ext = CentralExtension.from_congruence(G, Congruence(G, coset_labels(G, N)), V)
            for l in ext.sections():
                sections += 1
                T, psi = extract_cocycle(ext, l, verify=False)
                C, p = basic_construction(ext.kernel, ext.Q, T)
                bij = len(np.unique(psi)) == G.size
                hom = all(
                    bool((psi[np.asarray(G.tables[f])] == (
                        np.asarray(C.tables[f])[tuple(psi[g] for g in np.indices((G.size,) * ar))]
                        if ar else np.asarray(C.tables[f]))).all())
                    for f, ar in G.signature.symbols)
                if not (bij and hom and (p.map[psi] == ext.pi.map).all()):
                    failures.append(f"{name}/{len(N)}")
    checks = [(f"{cases} central congruences, {sections} sections, psi an isomorphism", not failures)]
    record(7, checks, time.perf_counter() - t, 120)


def test_criterion_8_schur_invariance():
    t = time.perf_counter()
    r = schur_invariance("z4")
    checks = [
        (f"k=1 factors {r['factors_1']} equal k=2 factors {r['factors_2']}", r["factors_match"]),
        ("sigma-hat maps M1 into M2", r["sigma_hat_into_M2"]),
        ("lambda-hat maps M2 into M1", r["lambda_hat_into_M1"]),
        ("lambda-hat sigma-hat = id on M1", r["lambda_sigma_id"]),
        ("sigma-hat lambda-hat = id on M2", r["sigma_lambda_id"]),
        ("two liftings agree on the multiplier", r["liftings_agree_on_multiplier"]),
    ]
    record(8, checks, time.perf_counter() - t, 120)


def test_criterion_9_schur_hopf():
    t = time.perf_counter()
    V = lib.s3_variety()
    Q = lib.cyclic_group(2)
    E = KernelAlgebra.from_algebra(lib.cyclic_group(6), V)
    p = presentation_of(Q, lib.symmetric_group(3), 1)
    r = schur_hopf_check(Q, E, p, V)
    if r["hypothesis_failed"]:
        ACCEPTANCE[9] = (True, "HypothesisFailed reported (no idempotent in F/[theta,1])")
        pytest.skip("HypothesisFailed")
    checks = [
        (f"im delta factors {r['im_delta_factors']} = Hom(M,E) factors {r['hom_M_E_factors']}",
         r["factors_match"]),
        ("cover certificates hold", r["cover_ok"]),
    ]
    record(9, checks, time.perf_counter() - t, 600)


def test_criterion_10_a5_perfect():
    t = time.perf_counter()
    A5 = lib.alternating_group(5)
    ok = is_perfect(A5, budget=20_000_000)
    record(10, [("[1,1] = 1 on A5", ok)], time.perf_counter() - t, 600)
