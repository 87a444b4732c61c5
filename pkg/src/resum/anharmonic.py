"""Case study: quartic anharmonic oscillator ground-state energy.

Exact perturbation coefficients from the wavefunction recursion feed four
estimation pipelines for the strong-coupling constant and coefficients:

* mass-side transform with center-of-zeros stationary/inflection selection,
* delta-expansion factors with largest-argument selection,
* derivative transforms for the strong-coupling expansion coefficients,
* coupling-side transform with an exponent ladder, quotient exponent
  estimation and diagonal Pade extrapolation.

Conventions: H = p^2/2 + x^2/2 + lambda x^4; the coupling is set to 1 during
estimation and the cube-root prefactor is carried implicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, NoCandidate, RangeError
from .estimate import Criterion, Estimate
from .numerics import DEFAULT_POLICY, PrecisionPolicy, as_mpf
from .pade import limit_at_infinity, pade
from .polyroot import Poly, all_roots, positive_real_roots
from .series import GenSeries, ReductionOp, apply_reduction, evaluate, log_derivative, taylor_div
from .transform import binom_factor, lde_factor

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = Fraction

__all__ = [
    "PerturbSeries",
    "CenterOfZeros",
    "bender_wu",
    "ebar",
    "elde",
    "center_of_zeros",
    "estimate_E",
    "estimate_alpha",
    "lambda_transform",
    "theta_ladder",
    "estimate_theta1",
    "estimate_E_lambda",
    "tstar_sequence",
    "STRONG_COUPLING_REFERENCE",
    "reference_E",
]

# Reference strong-coupling constant (60+ digits) used by tests and the
# error diagnostics of the energy estimators.
STRONG_COUPLING_REFERENCE = (
    "0.66798625915577710827096201691986019943"
    "04049369840604559766608"
)


@dataclass(frozen=True)
class PerturbSeries:
    """Exact rational perturbation coefficients a_0..a_N."""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class CenterOfZeros:
    """Positive real zeros of both log-derivatives and the chosen point."""

    real_zeros_d1: tuple
    real_zeros_d2: tuple
    chosen: Estimate


_BW_CACHE = {"coeffs": [Fraction(1, 2)], "rows": [[_mpq(1)]]}


def bender_wu(N: int) -> PerturbSeries:
    """Perturbation coefficients from the wavefunction power recursion.

    Writing psi = exp(-x^2/2) sum_n lambda^n B_n(x) with even polynomials
    B_n(x) = sum_m B[n][m] x^(2m) and matching powers in the Schroedinger
    equation gives

        2m B[n][m] = (m+1)(2m+1) B[n][m+1] - B[n-1][m-2]
                     + sum_{j=1}^{n-1} a_j B[n-j][m]

    solved top-down in m, with a_n = -B[n][1] from the constant term.
    Results are cached and extended incrementally.
    """
    if N < 0:
        raise RangeError("order must be >= 0")
    coeffs = _BW_CACHE["coeffs"]
    rows = _BW_CACHE["rows"]
    while len(coeffs) <= N:
        n = len(rows)
        prev = rows
        row = [_mpq(0)] * (2 * n + 1)
        for m in range(2 * n, 0, -1):
            acc = _mpq(0)
            if m + 1 <= 2 * n:
                acc += (m + 1) * (2 * m + 1) * row[m + 1]
            if 0 <= m - 2 <= 2 * (n - 1):
                acc -= prev[n - 1][m - 2]
            for j in range(1, n):
                source = prev[n - j]
                if m < len(source):
                    acc += _mpq(coeffs[j].numerator, coeffs[j].denominator) * source[m]
            row[m] = acc / (2 * m)
        rows.append(row)
        a_n = -row[1]
        coeffs.append(Fraction(a_n.numerator, a_n.denominator))
    return PerturbSeries(tuple(coeffs[: N + 1]))


def growth_ratio(n: int) -> mpf:
    """a_n / ((-3)^n Gamma(n+1/2)): approaches -sqrt(6)/pi^(3/2)."""
    a = bender_wu(n).coeffs[n]
    with mp.extraprec(20):
        denom = mpf(-3) ** n * mpmath.gamma(n + mpf(1) / 2)
        value = (mpf(a.numerator) / a.denominator) / denom
    return +value


def ebar(N: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> GenSeries:
    """Transformed energy: a_n times the binomial factor at s=(3n-1)/2.

    Exponent grid (3n-1)/2; integer-s factors stay exact rationals, the
    half-integer ones carry 1/pi at working precision.  Terms whose factor
    vanishes disappear, as the transform demands.
    """
    a = bender_wu(N).coeffs
    with policy.workprec(N):
        terms = []
        for n in range(N + 1):
            s = Fraction(3 * n - 1, 2)
            factor = binom_factor(N, s)
            if factor == 0:
                continue
            if isinstance(factor, Fraction):
                terms.append((s, a[n] * factor))
            else:
                terms.append((s, as_mpf(a[n]) * factor))
    return GenSeries(tuple(terms), Fraction(0), N)


def elde(N: int, include_n0: bool = True) -> GenSeries:
    """Delta-expansion energy: a_n C_{N,n} on the same exponent grid.

    All factors are exact positive rationals, so signs alternate exactly as
    in the source series.
    """
    a = bender_wu(N).coeffs
    start = 0 if include_n0 else 1
    terms = tuple(
        (Fraction(3 * n - 1, 2), a[n] * lde_factor(N, n))
        for n in range(start, N + 1)
    )
    return GenSeries(terms, Fraction(0), N)


def _z_polynomial(s: GenSeries):
    """(prefactor exponent e0, coefficient list) with exponents e0 + 3k/2.

    The series becomes t**e0 * P(z) with z = t**(3/2); vanished terms appear
    as zero coefficients.
    """
    exps = s.exponents()
    e0 = exps[0]
    step = Fraction(3, 2)
    top = (exps[-1] - e0) / step
    if top.denominator != 1:
        raise DomainError("series is not on a 3/2-step exponent grid")
    dense = [Fraction(0)] * (top.numerator + 1)
    for e, (_, c) in zip(exps, s.terms):
        idx = (e - e0) / step
        if idx.denominator != 1:
            raise DomainError("series is not on a 3/2-step exponent grid")
        dense[idx.numerator] = c
    return e0, dense


def _positive_zeros_z(series: GenSeries):
    """Positive real zeros (in z) of a series on the 3/2-step grid."""
    _, dense = _z_polynomial(series)
    while dense and dense[-1] == 0:
        dense.pop()
    if len(dense) <= 1:
        return []
    roots = all_roots(Poly(tuple(dense)))
    return positive_real_roots(roots)


def center_of_zeros(s: GenSeries) -> CenterOfZeros:
    """Estimation point where the zero sets of both log-derivatives meet.

    Zeros are located in the z = t**(3/2) plane.  Normally the first
    log-derivative oscillates through zero across the plateau and the
    flattest crossing (smallest |second|) is the estimate.  When an
    oscillation is about to be born, the first log-derivative dips towards
    the axis without crossing: two consecutive stationary points then
    enclose more than one inflection point, and the dip bottom (the
    enclosed inflection with the smallest |first|) becomes the estimate.
    """
    d1 = log_derivative(s)
    d2 = log_derivative(d1)
    z1 = _positive_zeros_z(d1)
    z2 = _positive_zeros_z(d2)
    if not z1 and not z2:
        raise NoCandidate("no positive real zeros in either log-derivative")

    stationary = []
    for z in z1:
        t = z ** (mpf(2) / 3)
        stationary.append((abs(evaluate(d2, t)), t))
    inflection = []
    for z in z2:
        t = z ** (mpf(2) / 3)
        inflection.append((abs(evaluate(d1, t)), t))

    # The center carries the smallest first-derivative oscillation.  When
    # that minimal-|first| inflection shares its stationary gap with another
    # inflection, the oscillation there has not crossed zero yet (a dip),
    # and the dip bottom itself is the estimation point.
    dip = None
    if inflection and stationary:
        u_score, u_t = min(inflection)
        ts = sorted(t for _, t in stationary)
        lo = max((t for t in ts if t < u_t), default=None)
        hi = min((t for t in ts if t > u_t), default=None)
        if lo is not None and hi is not None:
            inside = [c for c in inflection if lo < c[1] < hi]
            if len(inside) >= 2:
                dip = (u_score, u_t)

    if dip is not None:
        score, t = dip
        crit = Criterion.INFLECTION
    elif stationary:
        score, t = min(stationary)
        crit = Criterion.STATIONARY
    else:
        score, t = min(inflection)
        crit = Criterion.INFLECTION
    chosen = Estimate(
        evaluate(s, t), t, crit, evaluate(d1, t), evaluate(d2, t), s.order_N
    )
    return CenterOfZeros(tuple(z1), tuple(z2), chosen)


def _largest_t_estimate(s: GenSeries) -> Estimate:
    """Delta-expansion selection: the point at the largest argument.

    Stationary and inflection points compete together; the oscillation
    amplitude shrinks towards large arguments, so the outermost point of
    either kind is the least sensitive one.
    """
    d1 = log_derivative(s)
    d2 = log_derivative(d1)
    candidates = [(z, Criterion.STATIONARY) for z in _positive_zeros_z(d1)]
    candidates += [(z, Criterion.INFLECTION) for z in _positive_zeros_z(d2)]
    if not candidates:
        raise NoCandidate("no stationary or inflection point on the axis")
    z, crit = max(candidates, key=lambda c: c[0])
    t = z ** (mpf(2) / 3)
    return Estimate(
        evaluate(s, t), t, crit, evaluate(d1, t), evaluate(d2, t), s.order_N
    )


def estimate_E(N: int, scheme: str = "binomial",
               policy: PrecisionPolicy = DEFAULT_POLICY) -> Estimate:
    """Strong-coupling constant estimate at order N.

    scheme="binomial": center-of-zeros point of the transformed energy.
    scheme="lde": delta-expansion energy at its largest stationary (else
    inflection) point.
    """
    if N < 1:
        raise RangeError("order must be >= 1")
    if scheme == "binomial":
        with policy.workprec(N):
            return center_of_zeros(ebar(N, policy)).chosen
    if scheme == "lde":
        with policy.workprec(N):
            return _largest_t_estimate(elde(N))
    raise DomainError(f"unknown scheme {scheme!r}")


def alpha_series(N: int, k: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> GenSeries:
    """Transformed k-th mass-derivative series divided by k!.

    Differentiation acts on coefficients exactly before the transform:
    each derivative multiplies by -(current exponent) and shifts the
    exponent up one unit in 1/m^2.
    """
    if k < 1:
        raise RangeError("k must be >= 1")
    a = bender_wu(N).coeffs
    kfact = math.factorial(k)
    with policy.workprec(N):
        terms = []
        for n in range(N + 1):
            s0 = Fraction(3 * n - 1, 2)
            coeff = a[n]
            for j in range(k):
                coeff = coeff * (-(s0 + j))
            s = s0 + k
            factor = binom_factor(N, s)
            if factor == 0:
                continue
            coeff = coeff / kfact
            if isinstance(factor, Fraction):
                terms.append((s, coeff * factor))
            else:
                terms.append((s, as_mpf(coeff) * factor))
    return GenSeries(tuple(terms), Fraction(0), N)


def estimate_alpha(N: int, k: int,
                   policy: PrecisionPolicy = DEFAULT_POLICY) -> Estimate:
    """Strong-coupling expansion coefficient alpha_k at order N."""
    with policy.workprec(N):
        s = alpha_series(N, k, policy)
        return center_of_zeros(s).chosen


def lambda_transform(N: int) -> GenSeries:
    """Coupling-side transform: a_n C(N,n) on the integer grid in g."""
    a = bender_wu(N).coeffs
    terms = tuple(
        (Fraction(n), a[n] * Fraction(math.comb(N, n))) for n in range(N + 1)
    )
    return GenSeries(terms, Fraction(0), N)


def theta_ladder(count: int):
    """Correction exponent ladder 1/3, 5/3, 7/3, 11/3, ... (k = +-1 mod 6).

    Integer-exponent corrections vanish under the transform, which removes
    every third member of the naive (2k-1)/3 sequence.
    """
    out = []
    k = 1
    while len(out) < count:
        if k % 6 in (1, 5):
            out.append(Fraction(k, 3))
        k += 2
    return out


THETA0 = Fraction(-1, 3)


def estimate_theta1(N: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> Estimate:
    """Leading correction exponent from the reduced-quotient Pade limit.

    The factor (1 - 3 d/dlog g) kills the leading g**(1/3) behaviour of both
    the transformed energy and its log-derivative; the diagonal Pade limit
    of their formal quotient tends to minus the leading exponent.
    """
    if N < 4 or N % 2:
        raise RangeError("needs even N >= 4")
    with policy.workprec(N):
        e = lambda_transform(N)
        e1 = log_derivative(e)
        reduce0 = ReductionOp((THETA0,))
        top = apply_reduction(reduce0, e1)
        bottom = apply_reduction(reduce0, e)
        q = taylor_div(top, bottom, N)
        approx = pade(q, N // 2, N // 2)
        limit = limit_at_infinity(approx)
        value = -as_mpf(limit)
        return Estimate(value, mpf("inf"), Criterion.PADE_LIMIT, mpf(0), mpf(0), N)


def _poly_arith(coeffs_a, coeffs_b, op):
    if op == "mul":
        out = [mpf(0)] * (len(coeffs_a) + len(coeffs_b) - 1)
        for i, x in enumerate(coeffs_a):
            if x == 0:
                continue
            for j, y in enumerate(coeffs_b):
                out[i + j] += x * y
        return out
    n = max(len(coeffs_a), len(coeffs_b))
    a = list(coeffs_a) + [mpf(0)] * (n - len(coeffs_a))
    b = list(coeffs_b) + [mpf(0)] * (n - len(coeffs_b))
    if op == "sub":
        return [x - y for x, y in zip(a, b)]
    return [x + y for x, y in zip(a, b)]


def estimate_E_lambda(N: int, thetas=None, L: int = 1,
                      policy: PrecisionPolicy = DEFAULT_POLICY) -> Estimate:
    """Strong-coupling constant from the coupling-side pipeline.

    Applies L correction-reduction factors (exponents theta_1..theta_L,
    taken from ``thetas`` after its leading -1/3 normalization entry), forms
    the diagonal Pade of the reduced polynomial, divides out the g**(1/3)
    asymptotic normalization, and selects the flattest extremum/inflection
    point on g > 0.  Poles of the approximant on the positive axis are
    flagged but do not disqualify the estimate.
    """
    if L < 1:
        raise RangeError("L must be >= 1")
    if N < 2:
        raise RangeError("N must be >= 2")
    from .numerics import as_fraction

    ladder = list(thetas) if thetas is not None else [THETA0] + theta_ladder(L)
    ladder = [as_fraction(th) for th in ladder]  # mpf estimates become dyadic
    if ladder and ladder[0] == THETA0:
        ladder = ladder[1:]
    if len(ladder) < L:
        raise RangeError(f"need {L} correction exponents, got {len(ladder)}")
    corr = ladder[:L]

    with policy.workprec(N):
        e = lambda_transform(N)
        reduced = apply_reduction(ReductionOp(tuple(corr)), e)
        rho = N // 2
        approx = pade(reduced, rho, rho)

        # Normalization: the transformed leading term is
        # E * binom_factor(N, 1/3) * g**(1/3), and every reduction factor
        # scales it by (1 + (1/3)/theta_i).
        cnorm = as_mpf(binom_factor(N, Fraction(1, 3)))
        for th in corr:
            cnorm *= 1 + Fraction(1, 3) / th

        pc = [as_mpf(c) for c in approx.numer.coeffs]
        qc = [as_mpf(c) for c in approx.denom.coeffs]
        dp = [i * c for i, c in enumerate(pc)][1:] or [mpf(0)]
        dq = [i * c for i, c in enumerate(qc)][1:] or [mpf(0)]
        # A = g (P'Q - PQ'); extrema of R/g^(1/3) solve 3A - PQ = 0.
        a_poly = [mpf(0)] + _poly_arith(_poly_arith(dp, qc, "mul"),
                                        _poly_arith(pc, dq, "mul"), "sub")
        pq = _poly_arith(pc, qc, "mul")
        n1 = _poly_arith([3 * c for c in a_poly], pq, "sub")
        # B = g (A'Q - 2AQ'); inflections solve P Q^2 - 6AQ + 9B = 0.
        da = [i * c for i, c in enumerate(a_poly)][1:] or [mpf(0)]
        b_poly = [mpf(0)] + _poly_arith(_poly_arith(da, qc, "mul"),
                                        [2 * c for c in _poly_arith(a_poly, dq, "mul")],
                                        "sub")
        n2 = _poly_arith(
            _poly_arith(_poly_arith(pq, qc, "mul"),
                        [6 * c for c in _poly_arith(a_poly, qc, "mul")], "sub"),
            [9 * c for c in b_poly], "add")

        flags = []
        pole_hits = positive_real_roots(all_roots(Poly(tuple(qc))))
        if pole_hits:
            flags.append("PoleOnAxis")

        def g_derivs(g):
            g = as_mpf(g)
            ev = lambda cs: sum(c * g**i for i, c in enumerate(cs))
            p0, q0 = ev(pc), ev(qc)
            r = p0 / q0
            a_v = ev(a_poly)
            b_v = ev(b_poly)
            r1 = a_v / q0**2
            r2 = b_v / q0**3
            gpow = g ** (mpf(1) / 3)
            gval = r / gpow / cnorm
            d1 = (r1 - r / 3) / gpow / cnorm
            d2 = (r2 - 2 * r1 / 3 + r / 9) / gpow / cnorm
            return gval, d1, d2

        # Extrema are preferred; inflection points with small gradient only
        # stand in when the approximant has no extremum on the positive axis.
        extrema = []
        for g in positive_real_roots(all_roots(Poly(tuple(n1)))):
            value, d1, d2 = g_derivs(g)
            extrema.append((abs(d2), g, value, d1, d2, Criterion.STATIONARY))
        if extrema:
            score, g, value, d1, d2, crit = min(extrema, key=lambda c: c[0])
            return Estimate(value, g, crit, d1, d2, N, L, tuple(flags))
        inflections = []
        for g in positive_real_roots(all_roots(Poly(tuple(n2)))):
            value, d1, d2 = g_derivs(g)
            inflections.append((abs(d1), g, value, d1, d2, Criterion.INFLECTION))
        if not inflections:
            raise NoCandidate("no extremum or inflection point on g > 0")
        score, g, value, d1, d2, crit = min(inflections, key=lambda c: c[0])
        return Estimate(value, g, crit, d1, d2, N, L, tuple(flags))


def tstar_sequence(orders, policy: PrecisionPolicy = DEFAULT_POLICY):
    """(N, t*) pairs from the mass-side center-of-zeros estimation."""
    return [(N, estimate_E(N, "binomial", policy).location_t) for N in orders]


def sample_curve(s: GenSeries, ts, digits: int = 20):
    """[t, value] pairs of a series or its log-derivatives (plot data)."""
    from .numerics import to_decimal

    return [[to_decimal(as_mpf(t), digits), to_decimal(evaluate(s, as_mpf(t)), digits)]
            for t in ts]


def reference_E() -> mpf:
    """Reference strong-coupling constant at the current precision."""
    return mpf(STRONG_COUPLING_REFERENCE)
