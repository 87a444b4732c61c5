"""Diagonal Pade extrapolation of the divergent model.

Diagonal approximants of the transformed polynomial converge to the target
limit spectacularly fast, while the raw series manages only N/(N+2).  Near-
diagonal approximants provide plateau cross-checks, and zero/pole maps show
why the untouched transform beats its reduced variants here: more poles pair
up with nearby zeros and cancel.
"""

from fractions import Fraction

from mpmath import workprec

from resum.laplace import asymptotic_coeffs, fbar_poly, psi
from resum.numerics import to_decimal
from resum.pade import (
    limit_at_infinity,
    near_cancelling_pairs,
    near_diagonal_stationary,
    pade,
)

print("Diagonal limits, raw series vs transformed polynomial:")
with workprec(512):
    for order in (10, 20, 30, 40, 50):
        raw = limit_at_infinity(pade(asymptotic_coeffs(order), order // 2, order // 2))
        bar = limit_at_infinity(pade(fbar_poly(order), order // 2, order // 2))
        assert raw == Fraction(order, order + 2)
        print(f"  N={order:2}: raw {raw!s:>6} = {to_decimal(raw, 8)}   "
              f"transformed {to_decimal(bar, 17)}")

print("\nNear-diagonal plateau cross-checks at N=34:")
with workprec(64 + 12 * 34):
    fb34 = fbar_poly(34)
    for rho, tau in ((18, 16), (16, 18)):
        est = near_diagonal_stationary(pade(fb34, rho, tau))
        print(f"  [{rho}/{tau}]: {to_decimal(est.value, 8)} at t = "
              f"{to_decimal(est.location_t, 7)}")

print("\nZero/pole cancellations of diagonal approximants at N=30:")
with workprec(64 + 12 * 30):
    for level in (0, 1):
        approx = pade(psi(30, level), 15, 15)
        pairs = near_cancelling_pairs(approx)
        print(f"  L={level}: {pairs} left-half-plane poles cancelled by nearby zeros")
print("More cancelled pairs means fewer bare poles disturbing the real axis.")
