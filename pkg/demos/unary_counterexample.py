"""Abelian groups with one extra unary operation: A = <Z_n, g = x+1> x <Z_k, g = id>
over Q = <Z_k, g = id>, coefficients E = <Z_m, g = id>.

A has no idempotent element. The run prints what the five-term sequence does
here, including whether h(b, x) = b is a valid coboundary witness."""
from centralext.repro import unary_counterexample

for n, m, k in ((2, 3, 2), (2, 5, 3)):
    r = unary_counterexample(n, m, k)
    print(f"n={n} m={m} k={k}")
    for key in ("h2_Q_E_order", "S_nonzero", "hom_Bprime_E", "im_delta", "witness_valid",
                "witness_defect_ops", "ker_sigma_order", "exact_at_4", "A_has_idempotent"):
        print(f"  {key} = {r[key]}")
