"""Pade approximants from truncated series, limits and plateau diagnostics.

The denominator solve is exact (fraction-free Bareiss elimination on the
integer-cleared Toeplitz system) whenever the input coefficients are exact
rationals and rho+tau <= 120; larger or inexact systems use big-float
Gaussian elimination with full pivoting at a precision padded by the
coefficient spread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DegenerateError, NoStationaryPoint, RangeError
from .estimate import Criterion, Estimate
from .numerics import as_fraction, as_mpf, is_exact
from .polyroot import Poly, RootSet, all_roots, positive_real_roots
from .series import GenSeries

__all__ = ["PadeApprox", "pade", "limit_at_infinity", "zero_pole_map",
           "near_cancelling_pairs", "near_diagonal_stationary"]

_EXACT_SOLVE_LIMIT = 120


@dataclass(frozen=True)
class PadeApprox:
    """Rational approximant numer/denom with denom(0) = 1."""

    numer: Poly
    denom: Poly
    rho: int
    tau: int
    source_order: int
    degenerate: bool = False

    def eval_mpf(self, t):
        return self.numer.eval_mpf(t) / self.denom.eval_mpf(t)

    def to_json_data(self):
        def render(c):
            q = as_fraction(c)
            return f"{q.numerator}/{q.denominator}"

        return {
            "rho": self.rho,
            "tau": self.tau,
            "source_order": self.source_order,
            "degenerate": self.degenerate,
            "numer": [render(c) for c in self.numer.coeffs],
            "denom": [render(c) for c in self.denom.coeffs],
        }


def _dense_coeffs(s: GenSeries, length: int):
    """Series coefficients c_0..c_{length-1}; exponents must be integers >= 0."""
    out = [Fraction(0)] * length
    exact = True
    for e, (_, c) in zip(s.exponents(), s.terms):
        if e.denominator != 1 or e < 0:
            raise RangeError(f"Pade input needs integer exponents >= 0, got {e}")
        if e.numerator < length:
            out[e.numerator] = c
            exact = exact and is_exact(c)
    return out, exact


def _bareiss_solve(matrix, rhs):
    """Exact solve of an integer system; None when singular."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    prev = 1
    for k in range(n):
        piv = None
        for r in range(k, n):
            if a[r][k] != 0:
                piv = r
                break
        if piv is None:
            return None
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        for r in range(k + 1, n):
            for c in range(k + 1, n + 1):
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) // prev
            a[r][k] = 0
        prev = a[k][k]
    sol = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = Fraction(a[r][n])
        for c in range(r + 1, n):
            acc -= a[r][c] * sol[c]
        sol[r] = acc / a[r][r]
    return sol


def _float_solve(matrix, rhs):
    """Full-pivoting Gaussian elimination on mpf entries; None when singular."""
    n = len(matrix)
    spread = 0
    entries = [as_mpf(x) for row in matrix for x in row if x != 0]
    if entries:
        mags = [mpmath.mag(x) for x in entries]
        spread = max(mags) - min(mags)
    with mp.workprec(mp.prec + int(spread) + 64):
        a = [[as_mpf(x) for x in row] + [as_mpf(rhs[i])] for i, row in enumerate(matrix)]
        colperm = list(range(n))
        scale = max(abs(x) for row in a for x in row[:n]) or mpf(1)
        for k in range(n):
            pr, pc, best = k, k, mpf(-1)
            for r in range(k, n):
                for c in range(k, n):
                    v = abs(a[r][c])
                    if v > best:
                        pr, pc, best = r, c, v
            if best <= scale * mpf(2) ** (-(mp.prec - 16)):
                return None
            a[k], a[pr] = a[pr], a[k]
            if pc != k:
                for row in a:
                    row[k], row[pc] = row[pc], row[k]
                colperm[k], colperm[pc] = colperm[pc], colperm[k]
            for r in range(k + 1, n):
                f = a[r][k] / a[k][k]
                if f == 0:
                    continue
                for c in range(k, n + 1):
                    a[r][c] -= f * a[k][c]
        x = [mpf(0)] * n
        for r in range(n - 1, -1, -1):
            acc = a[r][n]
            for c in range(r + 1, n):
                acc -= a[r][c] * x[c]
            x[r] = acc / a[r][r]
        sol = [mpf(0)] * n
        for i, p in enumerate(colperm):
            sol[p] = x[i]
    return [+v for v in sol]


def pade(s: GenSeries, rho: int, tau: int) -> PadeApprox:
    """[rho/tau] approximant matching the series through order rho+tau.

    A singular denominator system deflates to [rho-1/tau-1] and sets the
    ``degenerate`` flag instead of failing.
    """
    if rho < 0 or tau < 0:
        raise RangeError("rho and tau must be >= 0")
    if s.order_N and rho + tau > s.order_N:
        raise RangeError(f"rho+tau={rho+tau} exceeds series order {s.order_N}")
    c, exact = _dense_coeffs(s, rho + tau + 1)

    if tau == 0:
        numer = Poly(tuple(c[: rho + 1])) if any(x != 0 for x in c[: rho + 1]) else Poly((0,))
        return PadeApprox(numer, Poly((1,)), rho, tau, s.order_N)

    # Toeplitz system for b_1..b_tau: sum_j b_j c_{rho+i-j} = -c_{rho+i}.
    def cc(k):
        return c[k] if 0 <= k <= rho + tau else Fraction(0)

    matrix = [[cc(rho + i - j) for j in range(1, tau + 1)] for i in range(1, tau + 1)]
    rhs = [-cc(rho + i) for i in range(1, tau + 1)]

    if exact and rho + tau <= _EXACT_SOLVE_LIMIT:
        denom_lcm = math.lcm(*(Fraction(x).denominator for row in matrix for x in row),
                             *(Fraction(x).denominator for x in rhs))
        int_matrix = [[int(Fraction(x) * denom_lcm) for x in row] for row in matrix]
        int_rhs = [int(Fraction(x) * denom_lcm) for x in rhs]
        b = _bareiss_solve(int_matrix, int_rhs)
    else:
        b = _float_solve(matrix, rhs)

    if b is None:
        if rho == 0 or tau == 0:
            raise DegenerateError(f"Pade system singular at [{rho}/{tau}]")
        inner = pade(s, rho - 1, tau - 1)
        return PadeApprox(inner.numer, inner.denom, rho, tau, s.order_N, degenerate=True)

    float_path = not exact or rho + tau > _EXACT_SOLVE_LIMIT
    if float_path:
        # The convolution cancels down from the largest products, so pad by
        # the magnitude spread of both factors.
        mags = [mpmath.mag(as_mpf(x)) for x in c if x != 0]
        spread = int(max(mags) - min(mags)) if mags else 0
        bmags = [mpmath.mag(as_mpf(x)) for x in b if x != 0]
        if bmags:
            spread += int(max(bmags) - min(bmags))
        with mp.workprec(mp.prec + spread + 64):
            bfull = [as_mpf(1)] + [as_mpf(x) for x in b]
            a = []
            for k in range(rho + 1):
                acc = bfull[0] * as_mpf(cc(k))
                for j in range(1, min(k, tau) + 1):
                    acc = acc + bfull[j] * as_mpf(cc(k - j))
                a.append(acc)
    else:
        bfull = [b[0] * 0 + 1] + list(b)  # 1 with matching arithmetic type
        a = []
        for k in range(rho + 1):
            acc = bfull[0] * cc(k)
            for j in range(1, min(k, tau) + 1):
                acc = acc + bfull[j] * cc(k - j)
            a.append(acc)
    numer = Poly(tuple(a)) if any(x != 0 for x in a) else Poly((0,))
    return PadeApprox(numer, Poly(tuple(bfull)), rho, tau, s.order_N)


def limit_at_infinity(p: PadeApprox):
    """t -> infinity limit of a diagonal approximant (leading-coeff ratio)."""
    if p.rho != p.tau:
        raise RangeError("limit at infinity needs a diagonal approximant")
    dn, dd = p.numer.degree, p.denom.degree
    if dn < dd:
        return Fraction(0) if is_exact(p.numer.coeffs[-1]) else mpf(0)
    if dn > dd:
        raise RangeError("approximant diverges at infinity")
    top, bottom = p.numer.coeffs[-1], p.denom.coeffs[-1]
    if is_exact(top) and is_exact(bottom):
        return Fraction(top) / Fraction(bottom)
    return as_mpf(top) / as_mpf(bottom)


def zero_pole_map(p: PadeApprox):
    """Root sets of the numerator and denominator polynomials."""
    zeros = all_roots(p.numer) if p.numer.degree >= 1 else RootSet((), mpf(0))
    poles = all_roots(p.denom) if p.denom.degree >= 1 else RootSet((), mpf(0))
    return zeros, poles


def near_cancelling_pairs(p: PadeApprox, tol=None, left_half_plane: bool = True) -> int:
    """Count poles approximately cancelled by a nearby zero.

    A pole q is cancelled when some unused zero lies within tol*(1+|q|); the
    default tolerance 1e-3 separates the tight Froissart-like pairs from the
    genuinely bare poles by the clear gap in the distance distribution.
    """
    tol = as_mpf(tol) if tol is not None else mpf("1e-3")
    zeros, poles = zero_pole_map(p)
    zs = [mpmath.mpc(a, b) for a, b in zeros.roots]
    qs = [mpmath.mpc(a, b) for a, b in poles.roots]
    if left_half_plane:
        qs = [q for q in qs if q.real < 0]
    pairs = 0
    used = set()
    for q in qs:
        best, best_d = None, None
        for i, z in enumerate(zs):
            if i in used:
                continue
            d = abs(z - q)
            if best is None or d < best_d:
                best, best_d = i, d
        if best is not None and best_d < tol * (1 + abs(q)):
            used.add(best)
            pairs += 1
    return pairs


def _poly_derivative_coeffs(coeffs):
    return [k * c for k, c in enumerate(coeffs)][1:] or [coeffs[0] * 0]


def _rational_log_derivs(p: PadeApprox, t):
    """(value, d/dlogt, (d/dlogt)^2) of numer/denom at t."""
    t = as_mpf(t)

    def ev(coeffs):
        acc = mpf(0)
        for c in reversed(coeffs):
            acc = acc * t + as_mpf(c)
        return acc

    pc = list(p.numer.coeffs)
    qc = list(p.denom.coeffs)
    p0, q0 = ev(pc), ev(qc)
    p1, q1 = ev(_poly_derivative_coeffs(pc)), ev(_poly_derivative_coeffs(qc))
    p2 = ev(_poly_derivative_coeffs(_poly_derivative_coeffs(pc)))
    q2 = ev(_poly_derivative_coeffs(_poly_derivative_coeffs(qc)))
    r = p0 / q0
    rp = (p1 - r * q1) / q0
    rpp = (p2 - 2 * rp * q1 - r * q2) / q0
    d1 = t * rp
    d2 = t * rp + t * t * rpp
    return r, d1, d2


def near_diagonal_stationary(p: PadeApprox) -> Estimate:
    """Plateau reference point of a near-diagonal approximant.

    Finds all positive real stationary points of numer/denom (roots of
    P'Q - PQ'), keeps those with value in (0, 2), and picks the flattest in
    the second log-derivative with ties going to the largest t.
    """
    if abs(p.rho - p.tau) not in (1, 2):
        raise RangeError("near-diagonal means |rho - tau| in {1, 2}")
    pc, qc = list(p.numer.coeffs), list(p.denom.coeffs)
    dp = _poly_derivative_coeffs(pc)
    dq = _poly_derivative_coeffs(qc)

    def polymul(a, b):
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return out

    def polysub(a, b):
        n = max(len(a), len(b))
        a = a + [a[0] * 0] * (n - len(a))
        b = b + [b[0] * 0] * (n - len(b))
        return [x - y for x, y in zip(a, b)]

    wron = polysub(polymul(dp, qc), polymul(pc, dq))
    wron_poly = Poly(tuple(wron)) if any(x != 0 for x in wron) else None
    if wron_poly is None or wron_poly.degree < 1:
        raise NoStationaryPoint("derivative has no positive real zeros")
    roots = all_roots(wron_poly)
    candidates = []
    for t in positive_real_roots(roots):
        value, d1, d2 = _rational_log_derivs(p, t)
        if 0 < value < 2:
            candidates.append((t, abs(d2), value, d1, d2))
    if not candidates:
        raise NoStationaryPoint("no positive real stationary point with value in (0,2)")
    from .estimate import plateau_top

    t, _, value, d1, d2 = plateau_top(candidates)
    return Estimate(value, t, Criterion.PLATEAU_TOP, d1, d2, p.source_order)
