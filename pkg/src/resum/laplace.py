"""Case study: resumming the divergent expansion of a Laplace-integral model.

The model function is f(M) = M * integral_0^inf w exp(-M w)/(1+w) dw, whose
1/M expansion 1!/M - 2!/M^2 + ... diverges.  The transform turns the
truncated series into a polynomial whose plateau height estimates
f(0) = 1; correction-reduction operators and stationary-point selection
sharpen the estimate, and pair extrapolation gives the infinite-order limit
of the estimate sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf, workprec

from .errors import DegenerateError, DomainError, NoStationaryPoint, RangeError
from .estimate import Criterion, Estimate, plateau_top
from .numerics import DEFAULT_POLICY, PrecisionPolicy, as_mpf
from .polyroot import Poly, all_roots, positive_real_roots
from .series import GenSeries, ReductionOp, apply_reduction, evaluate, log_derivative
from .transform import TransformSpec, binomial_transform

__all__ = [
    "LaplaceModel",
    "asymptotic_coeffs",
    "fbar_poly",
    "fbar_exact",
    "f_oracle",
    "psi",
    "psi_tail_value",
    "pms_estimate",
    "cstar_sequence",
    "c_max",
    "extrapolate_pair",
    "sample_psi_curve",
    "table1_rows",
    "table2_rows",
]


@dataclass(frozen=True)
class LaplaceModel:
    """Truncation order for the divergent 1/M expansion."""

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise RangeError("order must be >= 1")


def asymptotic_coeffs(N: int) -> GenSeries:
    """Divergent tail series: (-1)^(k+1) k! at power k of 1/M, k = 1..N."""
    if N < 1:
        raise RangeError("order must be >= 1")
    terms = tuple(
        (Fraction(k), Fraction((-1) ** (k + 1) * math.factorial(k)))
        for k in range(1, N + 1)
    )
    return GenSeries(terms, Fraction(0), N)


def fbar_poly(N: int) -> GenSeries:
    """Transformed polynomial: binomial factors applied to the 1/M series."""
    return binomial_transform(asymptotic_coeffs(N), TransformSpec(N))


def fbar_closed_poly(N: int) -> GenSeries:
    """Closed form N! sum_k (-1)^(k+1) t^k / (N-k)!; equals fbar_poly.

    The sign (-1)^(k+1) is inherited term by term from the alternating 1/M
    series; it puts the plateau at +1 and makes the exact-function identity
    fbar_exact - fbar_poly = N! (-t)^N exp(-1/t) hold.
    """
    fn = math.factorial(N)
    terms = tuple(
        (Fraction(k), Fraction((-1) ** (k + 1) * fn, math.factorial(N - k)))
        for k in range(1, N + 1)
    )
    return GenSeries(terms, Fraction(0), N)


def fbar_exact(t, N: int, terms: int = 0) -> mpf:
    """Entire-function value N! sum_k (-1)^k / ((N+k)! t^k).

    The sum is alternating with monotonically shrinking terms, so the
    truncation error is bounded by the first omitted term; by default the
    summation stops once that bound drops below the working epsilon.
    """
    t = as_mpf(t)
    if not t > 0:
        raise DomainError("fbar_exact needs t > 0")
    with mp.extraprec(20):
        eps = mpf(2) ** (-(mp.prec + 10))
        total = mpf(0)
        term = mpf(1)  # k = 0 term: N!/N! = 1
        k = 0
        while True:
            total += term
            k += 1
            if terms and k >= terms:
                break
            term = -term / ((N + k) * t)
            if not terms and abs(term) <= eps * max(abs(total), mpf(1)):
                break
            if k > 10_000_000:
                raise ArithmeticError("fbar_exact did not reach tolerance")
    return +total


def f_oracle(M) -> mpf:
    """Brute-force quadrature of M * int_0^inf w exp(-Mw)/(1+w) dw.

    Independent of every series routine; used as the ground-truth value of
    the model function.
    """
    M = as_mpf(M)
    if not M > 0:
        raise DomainError("f_oracle needs M > 0")
    with mp.extraprec(30):
        scale = 1 / M

        def integrand(w):
            return w * mpmath.exp(-M * w) / (1 + w)

        value = M * mpmath.quad(integrand, [0, scale, 40 * scale, mpmath.inf])
    return +value


def psi(N: int, L: int) -> GenSeries:
    """Correction-reduced polynomial with integer parameters p_i = 1..L."""
    if L < 0:
        raise RangeError("L must be >= 0")
    op = ReductionOp(tuple(Fraction(i) for i in range(1, L + 1)))
    return apply_reduction(op, fbar_poly(N))


def psi_tail_value(t, N: int, L: int) -> mpf:
    """Reduction operator applied to the exact large-t series, evaluated at t.

    Termwise the operator multiplies the t^-k coefficient by
    prod_i (1 - k/i), which vanishes for k = 1..L; summation follows the same
    alternating-tail bound as fbar_exact.
    """
    t = as_mpf(t)
    if not t > 0:
        raise DomainError("psi_tail_value needs t > 0")
    with mp.extraprec(20):
        eps = mpf(2) ** (-(mp.prec + 10))
        total = mpf(1)  # k = 0
        base = mpf(1)
        k = 0
        while True:
            k += 1
            base = -base / ((N + k) * t)
            factor = Fraction(1)
            for i in range(1, L + 1):
                factor *= 1 - Fraction(k, i)
            term = base * (mpf(factor.numerator) / factor.denominator) if factor else mpf(0)
            total += term
            if k > L and abs(base) <= eps * max(abs(total), mpf(1)) / (k ** max(L, 1)):
                break
            if k > 1_000_000:
                raise ArithmeticError("psi_tail_value did not reach tolerance")
    return +total


def _stationary_candidates(series: GenSeries):
    """(t, |d2|, value, d1, d2) at each positive real stationary point."""
    d1 = log_derivative(series)
    d2 = log_derivative(d1)
    if d1.is_zero:
        return []
    # d1 has integer exponents 1..N; factor one t out for the root polynomial.
    top = max(e.numerator for e in d1.exponents())
    dense = [Fraction(0)] * (top + 1)
    for e, (_, c) in zip(d1.exponents(), d1.terms):
        dense[e.numerator] = c
    if len(dense) <= 2:
        return []  # derivative t * const: no root off the origin
    roots = all_roots(Poly(tuple(dense[1:])))
    out = []
    for t in positive_real_roots(roots):
        value = evaluate(series, t)
        d2v = evaluate(d2, t)
        d1v = evaluate(d1, t)
        out.append((t, abs(d2v), value, d1v, d2v))
    return out


def pms_estimate(N: int, L: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> Estimate:
    """Plateau-top estimate of the M -> 0 limit from the reduced polynomial.

    All positive real stationary points are enumerated through the exact
    derivative polynomial; candidates with value outside (0, 2) are noise
    from off-plateau oscillations and are discarded.
    """
    with policy.workprec(N):
        series = psi(N, L)
        candidates = [c for c in _stationary_candidates(series) if 0 < c[2] < 2]
        if not candidates:
            raise NoStationaryPoint(f"no plateau stationary point at N={N}, L={L}")
        t, _, value, d1v, d2v = plateau_top(candidates)
        return Estimate(value, t, Criterion.STATIONARY, d1v, d2v, N, L)


def cstar_sequence(L: int, orders, policy: PrecisionPolicy = DEFAULT_POLICY):
    """t*(N) * N along the given orders; approaches a constant c_L."""
    orders = list(orders)
    if not orders:
        raise RangeError("orders must be nonempty")
    return [pms_estimate(N, L, policy).location_t * N for N in orders]


def c_max(prec_bits: int = 0) -> mpf:
    """Largest admissible plateau constant: the root of log c = 1 + 1/c."""
    with workprec(prec_bits or mp.prec):
        with mp.extraprec(10):
            c = mpf(3.6)
            for _ in range(mp.prec):
                f = mpmath.log(c) - 1 - 1 / c
                df = 1 / c + 1 / (c * c)
                step = f / df
                c -= step
                if abs(step) <= mpf(2) ** (-(mp.prec - 8)) * c:
                    break
        return +c


def extrapolate_pair(v1, N1: int, v2, N2: int) -> mpf:
    """Infinite-order value A from the two-point ansatz v = A (1 - B/N)."""
    if N1 == N2:
        raise DegenerateError("extrapolation needs two distinct orders")
    v1, v2 = as_mpf(v1), as_mpf(v2)
    y = (v1 - v2) / (mpf(1) / N2 - mpf(1) / N1)
    return v1 + y / N1


def sample_psi_curve(N: int, L: int, ts, digits: int = 20):
    """[t, value] pairs of the reduced polynomial (curve-plot data)."""
    from .numerics import to_decimal

    series = psi(N, L)
    return [[to_decimal(as_mpf(t), digits), to_decimal(evaluate(series, t), digits)]
            for t in ts]


def table1_rows(orders, levels, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Estimate grid keyed like the reference table: one row per order."""
    rows = []
    for n in orders:
        with policy.workprec(n):
            rows.append((n, [pms_estimate(n, level, policy).value for level in levels]))
    return rows


def table2_rows(orders, policy: PrecisionPolicy = DEFAULT_POLICY):
    """(N, plain diagonal limit, transformed diagonal limit) per even order."""
    from .pade import limit_at_infinity, pade

    rows = []
    for n in orders:
        if n % 2:
            raise RangeError("diagonal decomposition needs even N")
        with policy.workprec(n):
            plain = limit_at_infinity(pade(asymptotic_coeffs(n), n // 2, n // 2))
            bar = limit_at_infinity(pade(fbar_poly(n), n // 2, n // 2))
            rows.append((n, plain, bar))
    return rows
