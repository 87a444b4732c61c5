"""Plateau formation for the divergent Laplace-integral model.

The 1/M expansion 1!/M - 2!/M^2 + ... has zero radius of convergence, yet
its order-dependent binomial transform develops a plateau whose height
approximates f(0) = 1.  Correction-reduction operators flatten the plateau,
and the stationary point tracks c_L/N with c_L below the limiting constant
3.5911...
"""

from mpmath import workprec

from resum.laplace import c_max, cstar_sequence, f_oracle, fbar_poly, pms_estimate, psi
from resum.numerics import to_decimal
from resum.series import evaluate

with workprec(256):
    print("The model function via brute-force quadrature:")
    for m_val in ("10", "1", "0.01"):
        print(f"  f({m_val:>5}) = {to_decimal(f_oracle(m_val), 12)}")
    print("  f(M -> 0) = 1: the target of the resummation.\n")

order = 20
print(f"Transformed polynomial at order {order}, sampled across its plateau:")
with workprec(64 + 12 * order):
    series = fbar_poly(order)
    for t_num in (2, 6, 10, 14, 18, 22):
        t = t_num / 100
        print(f"  fbar_{order}({t:4.2f}) = {to_decimal(evaluate(series, t), 10)}")

print("\nReduction operators lift the plateau towards 1 at the same order:")
for level in range(4):
    est = pms_estimate(order, level)
    print(f"  L={level}: plateau top {to_decimal(est.value, 10)} at t* = "
          f"{to_decimal(est.location_t, 6)}")

print("\nThe stationary point scales like c_L/N; c_L creeps towards the limit:")
for level in (0, 1):
    seq = cstar_sequence(level, [20, 40, 60])
    rendered = ", ".join(to_decimal(c, 6) for c in seq)
    print(f"  L={level}: t* x N at N=20,40,60 -> {rendered}")
with workprec(128):
    print(f"  limit (root of log c = 1 + 1/c): {to_decimal(c_max(), 16)}")
