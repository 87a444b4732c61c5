import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf, workprec

from resum.errors import DegenerateError, DomainError, RangeError
from resum.estimate import Criterion
from resum.laplace import (
    sample_psi_curve,
    table1_rows,
    table2_rows,
    LaplaceModel,
    asymptotic_coeffs,
    c_max,
    cstar_sequence,
    extrapolate_pair,
    f_oracle,
    fbar_closed_poly,
    fbar_exact,
    fbar_poly,
    pms_estimate,
    psi,
    psi_tail_value,
)
from resum.series import evaluate, log_derivative

F = Fraction


def test_model_validation():
    assert LaplaceModel(3).N == 3
    with pytest.raises(RangeError):
        LaplaceModel(0)


def test_asymptotic_coeffs_values():
    s = asymptotic_coeffs(3)
    assert s.coeff(1) == 1
    assert s.coeff(2) == -2
    assert s.coeff(3) == 6
    long = asymptotic_coeffs(60)
    for k in range(1, 61):
        assert (long.coeff(k) > 0) == (k % 2 == 1)
        assert abs(long.coeff(k)) == math.factorial(k)


def test_fbar_matches_closed_form():
    for n_order in (2, 17, 50, 100):
        assert fbar_poly(n_order).terms == fbar_closed_poly(n_order).terms


def test_fbar_top_coefficient_sign():
    # Top coefficient is (-1)^(N+1) N!: the transform keeps the alternating
    # signs of the source series.
    for n_order in (2, 5, 8):
        top = fbar_poly(n_order).coeff(n_order)
        assert top == F((-1) ** (n_order + 1) * math.factorial(n_order))


def test_fbar_order_two():
    s = fbar_poly(2)
    assert s.coeff(1) == 2 and s.coeff(2) == -2


def test_fbar_exact_leading_term(prec256):
    # k = 0 term alone: value -> 1 as t -> infinity.
    assert abs(fbar_exact(mpf("1e40"), 5) - 1) < mpf("1e-38")


def test_fbar_exact_large_order_limit(prec256):
    assert abs(fbar_exact(mpf(1), 10**6) - 1) < mpf("1e-6")


def test_fbar_exact_domain():
    with pytest.raises(DomainError):
        fbar_exact(0, 5)


def test_residual_identity(prec256):
    # fbar_exact - polynomial = N! (-t)^N exp(-1/t); odd N pins the sign.
    for n_order in (3, 10, 17):
        t = mpf("0.3")
        lhs = fbar_exact(t, n_order) - evaluate(fbar_poly(n_order), t)
        rhs = mpf(math.factorial(n_order)) * (-t) ** n_order * mpmath.exp(-1 / t)
        assert abs(lhs - rhs) < abs(rhs) * mpf("1e-30")


def test_f_oracle_small_argument_limit(prec256):
    assert abs(f_oracle(mpf("1e-4")) - 1) < mpf("1e-3")


def test_f_oracle_against_closed_form(prec256):
    # 1 - M exp(M) E1(M) is an independent closed form of the integral.
    for m_val in (mpf("0.01"), mpf(1), mpf(37)):
        closed = 1 - m_val * mpmath.exp(m_val) * mpmath.e1(m_val)
        assert abs(f_oracle(m_val) - closed) < mpf("1e-60")


def test_f_oracle_asymptotic_tail_bound(prec256):
    # |f(M) - sum_1^N| <= (N+1)!/M^(N+1) at M = 50, N = 10.
    m_val = mpf(50)
    value = f_oracle(m_val)
    partial = evaluate(asymptotic_coeffs(10), 1 / m_val)
    assert abs(value - partial) <= mpf(math.factorial(11)) / m_val**11


def test_f_oracle_small_m_log_expansion(prec256):
    # f(M) = 1 + M(log M + gamma_E) + O(M^2 log M), checked at M = 1e-3.
    m_val = mpf("1e-3")
    rest = f_oracle(m_val) - 1 - m_val * (mpmath.log(m_val) + mpmath.euler)
    assert abs(rest) < m_val**2 * abs(mpmath.log(m_val)) * 5


def test_f_oracle_optimal_truncation_near_m(prec256):
    # The best truncation of the divergent tail sits near k = M.
    m_val = mpf(20)
    truth = f_oracle(m_val)
    errors = []
    series = asymptotic_coeffs(40)
    partial = mpf(0)
    for k in range(1, 41):
        partial += mpf(int(series.coeff(k))) / m_val**k
        errors.append((abs(partial - truth), k))
    _, best_k = min(errors)
    assert 15 <= best_k <= 25


def test_f_oracle_domain():
    with pytest.raises(DomainError):
        f_oracle(0)


def test_psi_reductions():
    assert psi(7, 0).terms == fbar_poly(7).terms
    # (1 + d/dlog t) on 2t - 2t^2 scales by (1+e): 4t - 6t^2.
    s = psi(2, 1)
    assert s.coeff(1) == 4 and s.coeff(2) == -6


def test_psi_annihilates_tail_exponents(prec256):
    # On the exact large-t series the operator kills t^-1..t^-L exactly:
    # psi_tail at L with huge t approaches 1 faster than any killed term.
    t = mpf(10) ** 6
    for L in (1, 3):
        value = psi_tail_value(t, 50, L)
        assert abs(value - 1) < mpf(10) ** (-6 * (L + 1) + 2)


def test_pms_estimates_match_reference_table():
    table = {
        (10, 0): "0.69276626", (10, 3): "0.97185783",
        (20, 1): "0.91367909", (20, 5): "0.99742866",
        (30, 2): "0.97580002", (40, 4): "0.99763006",
    }
    for (n_order, level), want in table.items():
        est = pms_estimate(n_order, level)
        assert est.criterion is Criterion.STATIONARY
        assert abs(est.first_deriv) < mpf("1e-20")
        assert abs(est.value - mpf(want)) < mpf("1e-8")


def test_pms_values_increase_with_order():
    for level in (0, 2):
        values = [pms_estimate(n, level).value for n in (10, 20, 30, 40)]
        assert values == sorted(values)


def test_cstar_monotone_fast_orders():
    seq = cstar_sequence(0, [20, 40, 60])
    assert seq == sorted(seq)
    assert all(c < mpf("3.591121477") for c in seq)


def test_c_max_value_and_residual():
    with workprec(256):
        c = c_max()
        assert abs(c - mpf("3.591121476668622")) < mpf("1e-15")
        residual = mpmath.log(c) - 1 - 1 / c
        assert abs(residual) < mpf(2) ** (-mp.prec + 4)


def test_c_max_bisection_oracle():
    with workprec(256):
        lo, hi = mpf(3), mpf(4)
        for _ in range(150):
            mid = (lo + hi) / 2
            if mpmath.log(mid) - 1 - 1 / mid < 0:
                lo = mid
            else:
                hi = mid
        assert abs(c_max() - lo) < mpf("1e-40")


def test_extrapolate_recovers_exact_model(prec256):
    a_true, b_true = mpf("0.95"), mpf("2.5")
    v1 = a_true * (1 - b_true / 290)
    v2 = a_true * (1 - b_true / 300)
    assert abs(extrapolate_pair(v1, 290, v2, 300) - a_true) < mpf("1e-25")


def test_extrapolate_degenerate():
    with pytest.raises(DegenerateError):
        extrapolate_pair(mpf(1), 10, mpf(2), 10)


def test_psi_tail_matches_extrapolated_row(prec256):
    # Direct numerical evaluation at t = c_max/N for huge N against the
    # extrapolated estimates of the reference table.
    cm = c_max()
    big = 10**6
    extrapolated = ["0.78151", "0.95212", "0.98950", "0.99771", "0.99950", "0.99989"]
    for level, want in enumerate(extrapolated):
        value = psi_tail_value(cm / big, big, level)
        assert abs(value - mpf(want)) < mpf("1e-2")


@pytest.mark.slow
def test_cstar_constants_at_order_300():
    for level, want in [(0, "3.4855"), (1, "3.4252"), (2, "3.3698")]:
        got = cstar_sequence(level, [300])[0]
        assert abs(got - mpf(want)) < mpf("1e-3")


@pytest.mark.slow
def test_extrapolated_pair_at_high_order():
    est290 = pms_estimate(290, 1)
    est300 = pms_estimate(300, 1)
    limit = extrapolate_pair(est290.value, 290, est300.value, 300)
    assert abs(limit - mpf("0.95212")) < mpf("5e-4")


def test_sample_psi_curve_matches_direct_evaluation(prec256):
    pairs = sample_psi_curve(12, 1, [mpf("0.05"), mpf("0.1"), mpf("0.2")])
    assert len(pairs) == 3
    series = psi(12, 1)
    for (t_text, v_text), t in zip(pairs, (mpf("0.05"), mpf("0.1"), mpf("0.2"))):
        assert abs(mpf(v_text) - evaluate(series, t)) < mpf("1e-15")


def test_table_row_helpers():
    rows = table1_rows([10], [0, 1])
    assert rows[0][0] == 10
    assert abs(rows[0][1][0] - mpf("0.69276626")) < mpf("1e-8")
    t2 = table2_rows([10])
    assert t2[0][1] == F(5, 6)
    assert t2[0][2] == F(127, 126)
