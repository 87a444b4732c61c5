import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf, workprec

from resum.errors import NoCandidate, RangeError
from resum.estimate import Criterion
from resum.anharmonic import (
    THETA0,
    alpha_series,
    bender_wu,
    center_of_zeros,
    ebar,
    elde,
    estimate_E,
    estimate_E_lambda,
    estimate_alpha,
    estimate_theta1,
    growth_ratio,
    lambda_transform,
    reference_E,
    theta_ladder,
    tstar_sequence,
)
from resum.series import GenSeries, ReductionOp, apply_reduction
from resum.transform import TransformSpec, binomial_transform

F = Fraction


def rayleigh_schroedinger_oracle(order=4, states=9):
    """Perturbation energies for H0 + lambda x^4 in the ladder basis.

    Works with unnormalized number states |n) = (adag)^n |0>, where the
    quartic term acts with integer coefficients and H0 is diagonal, so every
    step stays in exact rational arithmetic.  Intermediate normalization
    fixes psi_k(0) = 0 for k >= 1.
    """

    def apply_x4(state):
        # x^4 = (a + adag)^4 / 4 with a|n) = n|n-1), adag|n) = |n+1)
        current = dict(state)
        for _ in range(4):
            nxt = {}
            for n, c in current.items():
                nxt[n + 1] = nxt.get(n + 1, F(0)) + c
                if n >= 1:
                    nxt[n - 1] = nxt.get(n - 1, F(0)) + n * c
            current = nxt
        return {n: c / 4 for n, c in current.items() if n < states}

    energies = [F(1, 2)]
    waves = [{0: F(1)}]
    for k in range(1, order + 1):
        rhs = apply_x4(waves[k - 1])
        for j in range(1, k):
            for n, c in waves[k - j].items():
                rhs[n] = rhs.get(n, F(0)) - energies[j] * c
        energies.append(rhs.get(0, F(0)))
        wave = {}
        for n, c in rhs.items():
            if n >= 1:
                wave[n] = -c / n
        waves.append(wave)
    return energies


def test_first_coefficients_exact():
    coeffs = bender_wu(3).coeffs
    assert coeffs == (F(1, 2), F(3, 4), F(-21, 8), F(333, 16))


def test_matrix_oracle_reproduces_recursion():
    oracle = rayleigh_schroedinger_oracle(order=4, states=9)
    recursion = bender_wu(4).coeffs
    assert tuple(oracle) == recursion


def test_sign_alternation():
    coeffs = bender_wu(60).coeffs
    for n in range(1, 61):
        assert (coeffs[n] > 0) == (n % 2 == 1)


def test_ratio_growth_is_roughly_linear():
    coeffs = bender_wu(40).coeffs
    ratios = [abs(coeffs[n + 1] / coeffs[n]) for n in range(20, 40)]
    slopes = [ratios[i + 1] - ratios[i] for i in range(len(ratios) - 1)]
    # |a_{n+1}/a_n| ~ 3n + const: increments approach 3
    for s in slopes[5:]:
        assert F(2) < s < F(4)


def test_growth_constant_sanity_at_order_60():
    with workprec(256):
        target = -mpmath.sqrt(6) / mp.pi ** mpf("1.5")
        assert abs(growth_ratio(60) / target - 1) < mpf("0.05")


@pytest.mark.slow
def test_growth_constant_at_order_250():
    with workprec(512):
        target = -mpmath.sqrt(6) / mp.pi ** mpf("1.5")
        assert abs(growth_ratio(250) / target - 1) < mpf("0.02")


def test_ebar_integer_factor_terms(prec256):
    s = ebar(8)
    # n = 1: s = 1, factor C(8,1) = 8 on a_1 = 3/4
    assert s.coeff(F(1)) == F(3, 4) * 8


def test_ebar_vanishing_term_at_order_three(prec256):
    s = ebar(3)
    assert s.coeff(F(4)) == 0  # (N, n) = (3, 3) annihilated


def test_ebar_leading_coefficient_order_one(prec256):
    # a_0 * binom factor at s = -1/2 equals (1/2) * 4/(3 pi).
    from resum.numerics import PrecisionPolicy

    s = ebar(1, PrecisionPolicy(base_bits=256))
    want = mpf(2) / (3 * mp.pi)
    got = s.coeff(F(-1, 2))
    assert abs(got - want) < mpf(2) ** -240


def test_elde_coefficients(prec256):
    s = elde(6)
    assert s.coeff(F(-1, 2)) == F(1, 2) * F(math.factorial(12), 4**6 * math.factorial(6) ** 2)
    assert s.coeff(F(1)) == F(3, 4) * 6
    # positivity of the factors preserves sign alternation
    coeffs = [s.coeff(F(3 * n - 1, 2)) for n in range(1, 7)]
    for n, c in enumerate(coeffs, start=1):
        assert (c > 0) == (n % 2 == 1)


def test_center_of_zeros_criterion_switch():
    est23 = estimate_E(23, "binomial")
    assert est23.criterion is Criterion.STATIONARY
    est50 = estimate_E(50, "binomial")
    assert est50.criterion is Criterion.INFLECTION


def test_center_of_zeros_pure_power_has_no_candidate():
    s = GenSeries(((F(-1, 2), F(1, 2)),), F(0), 0)
    with pytest.raises(NoCandidate):
        center_of_zeros(s)


def test_stationary_zero_count_in_plot_window():
    # First log-derivative of the order-50 transformed energy: 11 positive
    # real zeros up to t = 0.13 (the window of the reference scatter plot).
    from resum.anharmonic import _positive_zeros_z
    from resum.series import log_derivative

    with workprec(64 + 12 * 50):
        zs = _positive_zeros_z(log_derivative(ebar(50)))
        ts = [z ** (mpf(2) / 3) for z in zs]
        assert sum(1 for t in ts if t < mpf("0.13")) == 11


def test_estimate_E_binomial_reference_orders():
    est20 = estimate_E(20, "binomial")
    assert abs(est20.value - mpf("0.667986268")) < mpf("5e-9")
    with workprec(64 + 12 * 50):
        ref = reference_E()
    est50 = estimate_E(50, "binomial")
    assert abs(est50.value - ref) <= mpf("5e-13")


def test_estimate_E_lde_reference_orders():
    est25 = estimate_E(25, "lde")
    assert abs(est25.value - mpf("0.66798625920")) < mpf("1e-11")
    est10 = estimate_E(10, "lde")
    assert abs(est10.value - mpf("0.6679857")) < mpf("1e-7")


def test_estimate_E_validation():
    with pytest.raises(RangeError):
        estimate_E(0, "binomial")
    with pytest.raises(Exception):
        estimate_E(10, "nonsense")


def test_crossover_between_schemes():
    with workprec(64 + 12 * 100):
        ref = reference_E()
    # delta expansion wins at low order, the transform wins at high order
    err_bin_10 = abs(estimate_E(10, "binomial").value - ref)
    err_lde_10 = abs(estimate_E(10, "lde").value - ref)
    assert err_lde_10 < err_bin_10
    err_bin_100 = abs(estimate_E(100, "binomial").value - ref)
    err_lde_100 = abs(estimate_E(100, "lde").value - ref)
    assert err_bin_100 < err_lde_100


def test_estimate_invariant_under_series_rescaling():
    # scaling the series by 7 scales the estimate by 7, same location
    with workprec(64 + 12 * 20):
        s = ebar(20)
        plain = center_of_zeros(s)
        scaled = center_of_zeros(s.scaled(7))
        assert abs(scaled.chosen.location_t - plain.chosen.location_t) < mpf("1e-30")
        assert abs(scaled.chosen.value / 7 - plain.chosen.value) < mpf("1e-30")


def test_alpha_values_converge_to_reference():
    table_250 = {
        1: "0.1436687833808649100203190808",
        2: "-0.0086275656808022791279635744",
        3: "0.0008182089057563495424151582",
    }
    for k, want in table_250.items():
        est = estimate_alpha(60, k)
        assert abs(est.value - mpf(want)) < mpf("1e-12")


def test_alpha_series_structure(prec256):
    from resum.numerics import PrecisionPolicy
    from resum.transform import binom_factor

    s = alpha_series(6, 1, PrecisionPolicy(base_bits=256))
    # derivative shifts the grid up one unit: lowest exponent 1/2
    assert s.exponents()[0] == F(1, 2)
    # n = 0 coefficient: a_0 * (1/2) / 1! times the transform factor
    want = mpf(1) / 4 * binom_factor(6, F(1, 2))
    assert abs(s.coeff(F(1, 2)) - want) < abs(want) * mpf(2) ** -200


def test_alpha_requires_positive_k():
    with pytest.raises(RangeError):
        estimate_alpha(10, 0)


def test_lambda_transform_endpoints():
    s = lambda_transform(12)
    assert s.coeff(F(0)) == F(1, 2)
    assert s.coeff(F(12)) == bender_wu(12).coeffs[12]


def test_lambda_transform_matches_transform_module():
    n_order = 9
    a = bender_wu(n_order).coeffs
    raw = GenSeries(tuple((F(n), a[n]) for n in range(n_order + 1)), F(0), n_order)
    via_module = binomial_transform(raw, TransformSpec(n_order))
    assert lambda_transform(n_order).terms == via_module.terms


def test_lambda_side_annihilates_negative_integer_powers():
    # Truncation of g^(1/3) + sum c_L g^-L: the transform of the integer
    # part must vanish identically.
    n_order = 12
    terms = [(F(-L), F(L * L + 1)) for L in range(1, 6)]
    s = GenSeries(tuple(terms), F(0), n_order)
    out = binomial_transform(s, TransformSpec(n_order))
    assert out.is_zero


def test_theta_ladder():
    assert theta_ladder(5) == [F(1, 3), F(5, 3), F(7, 3), F(11, 3), F(13, 3)]
    assert THETA0 == F(-1, 3)


def test_exponent_recovery_on_synthetic_divergent_series():
    # Independent oracle for the quotient pipeline: the divergent series
    # sum (-1)^n prod_{j<n}(j+1/3) g^n (a Laplace-type integral of
    # (1+gu)^(-1/3)) behaves like g^(-1/3) at strong coupling with
    # corrections g^(-1/3-k) plus an integer family that the transform
    # kills.  Reducing away the leading g^(-1/3) leaves g^(-4/3), so the
    # diagonal Pade limit of the quotient must approach -4/3.
    n_order = 40
    with workprec(64 + 12 * n_order):
        from resum.series import log_derivative, taylor_div
        from resum.pade import limit_at_infinity, pade
        from resum.transform import binomial_transform as bt

        coeffs = []
        c = F(1)
        for n in range(n_order + 1):
            coeffs.append(c * (-1) ** n)
            c *= F(1, 3) + n
        s = GenSeries(tuple((F(n), coeffs[n]) for n in range(n_order + 1)), F(0), n_order)
        sbar = bt(s, TransformSpec(n_order))
        op = ReductionOp((F(1, 3),))
        bottom = apply_reduction(op, sbar)
        top = apply_reduction(op, log_derivative(sbar))
        q = taylor_div(top, bottom, n_order)
        limit = limit_at_infinity(pade(q, n_order // 2, n_order // 2))
        recovered = -mpf(limit.numerator) / limit.denominator
        assert abs(recovered - F(4, 3)) < mpf("1e-4")


def test_theta1_estimate_at_order_60():
    est = estimate_theta1(60)
    assert abs(est.value - F(1, 3)) < mpf("1e-2")
    assert est.criterion is Criterion.PADE_LIMIT


def test_theta1_validation():
    with pytest.raises(RangeError):
        estimate_theta1(7)


def test_lambda_pipeline_converges_with_reductions():
    # Accuracy need not improve at every step (deeper reductions can lose
    # ground at fixed order before winning at higher order), but stacking
    # exponents must pay off overall.
    with workprec(64 + 12 * 60):
        ref = reference_E()
    errors = []
    for level in (1, 4, 8):
        est = estimate_E_lambda(60, L=level)
        errors.append(abs(est.value - ref))
    assert errors[2] < errors[0] / 100
    assert errors[2] < mpf("1e-7")


def test_lambda_pipeline_with_estimated_exponent():
    with workprec(64 + 12 * 60):
        ref = reference_E()
    theta1 = estimate_theta1(60).value
    exact = estimate_E_lambda(60, L=1)
    estimated = estimate_E_lambda(60, thetas=[THETA0, theta1], L=1)
    # same leading digits as with the exact exponent
    assert abs(estimated.value - exact.value) < mpf("1e-5")


def test_lambda_pipeline_validation():
    with pytest.raises(RangeError):
        estimate_E_lambda(60, L=0)
    with pytest.raises(RangeError):
        estimate_E_lambda(60, thetas=[THETA0], L=2)


def test_tstar_decreases_fast_orders():
    pts = tstar_sequence([30, 40, 50])
    values = [t for _, t in pts]
    assert all(t > 0 for t in values)
    assert values == sorted(values, reverse=True)


@pytest.mark.slow
def test_tstar_scaling_exponent():
    import math as _math

    pts = tstar_sequence([270, 275, 280, 285, 290, 295, 300])
    xs = [_math.log(n) for n, _ in pts]
    ys = [float(mpmath.log(t)) for _, t in pts]
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sum(
        (x - xbar) ** 2 for x in xs
    )
    assert abs(slope - (-0.56)) < 0.1


@pytest.mark.slow
def test_alpha_stability_between_orders_250_and_300():
    # Digits shared between successive high-order runs: the order-300 value
    # agrees with its own reference string, which shares 24+ digits with the
    # order-250 one.
    est = estimate_alpha(300, 1)
    with workprec(512):
        want = mpf("0.1436687833808649100203191272")
        assert abs(est.value - want) < mpf("1e-24")


def test_sample_curve_matches_evaluate(prec256):
    from resum.anharmonic import sample_curve
    from resum.series import evaluate as ev

    s = ebar(8)
    pairs = sample_curve(s, [mpf("0.05"), mpf("0.1")])
    for (t_text, v_text), t in zip(pairs, (mpf("0.05"), mpf("0.1"))):
        assert abs(mpf(v_text) - ev(s, t)) < mpf("1e-15")
