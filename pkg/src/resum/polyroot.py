"""All complex roots of arbitrary-precision polynomials.

Aberth-Ehrlich simultaneous iteration with initial guesses placed on circles
whose radii come from the upper convex hull of the coefficient magnitudes
(capped by the Fujiwara bound).  The inner loop runs on gmpy2 complex
arithmetic when available, falling back to mpmath otherwise; results are
returned as mpf pairs regardless of backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import ConvergenceError, RangeError
from .numerics import as_fraction, as_mpf

try:
    import gmpy2

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None
    _HAVE_GMPY2 = False

__all__ = ["Poly", "RootSet", "all_roots", "positive_real_roots"]


@dataclass(frozen=True)
class Poly:
    """Coefficients in ascending degree; leading coefficient nonzero."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        if not cs:
            raise RangeError("empty coefficient list")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval_mpf(self, x):
        x = as_mpf(x)
        acc = mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + as_mpf(c)
        return acc

    def derivative(self) -> "Poly":
        if self.degree == 0:
            return Poly((0,))
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))


@dataclass(frozen=True)
class RootSet:
    """Roots as (re, im) mpf pairs plus a relative residual bound."""

    roots: tuple
    residual_bound: mpf

    def as_mpc(self):
        return [mpmath.mpc(re, im) for re, im in self.roots]

    def to_json_data(self, digits: int = 30):
        from .numerics import to_decimal

        return [[to_decimal(re, digits), to_decimal(im, digits)] for re, im in self.roots]


def positive_real_roots(rs: RootSet, tol=None):
    """Sorted distinct real roots on the positive axis.

    A root counts as real when |im| < tol*(1+|re|); duplicates within the
    same tolerance collapse to one representative.
    """
    if tol is None:
        tol = mpf(2) ** (-(mp.prec // 2))
    tol = as_mpf(tol)
    hits = sorted(re for re, im in rs.roots if re > 0 and abs(im) < tol * (1 + abs(re)))
    out = []
    for r in hits:
        if not out or abs(r - out[-1]) >= tol * (1 + abs(r)):
            out.append(r)
    return out


# ----------------------------------------------------------------------
# backend helpers


def _to_fraction_coeffs(coeffs):
    return [as_fraction(c) for c in coeffs]


def _upper_hull_radii(logmags, degree):
    """Initial moduli from the upper convex hull of (k, log2|c_k|).

    Returns a list of per-root radii (as float log2 values) of length
    ``degree``; hull segments with horizontal span m contribute m equal
    radii.
    """
    pts = [(k, lm) for k, lm in enumerate(logmags) if lm is not None]
    hull = []
    for p in pts:
        # pop while the middle point falls on or below the new chord
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x2) <= (p[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    radii = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = (y2 - y1) / (x2 - x1)
        for _ in range(x2 - x1):
            radii.append(-slope)
    while len(radii) < degree:
        radii.append(radii[-1] if radii else 0.0)
    return radii[:degree]


def all_roots(p: Poly, max_iter: int = 500, target_bits=None) -> RootSet:
    """Every complex root, refined until Newton corrections are negligible.

    Convergence requires the max relative Newton correction to drop below
    2**-(prec-20); hitting ``max_iter`` first raises ConvergenceError.
    Conjugate symmetry is enforced for real input polynomials.
    """
    if p.degree < 1:
        raise RangeError("root finding needs degree >= 1")
    prec = target_bits or mp.prec
    work = prec + 32

    coeffs = _to_fraction_coeffs(p.coeffs)

    # Exact roots at the origin: strip trailing (low-order) zeros.
    n_zero = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        n_zero += 1
    zero_roots = [(mpf(0), mpf(0))] * n_zero
    degree = len(coeffs) - 1
    if degree == 0:
        return RootSet(tuple(zero_roots), mpf(0))

    if degree == 1:
        with mp.workprec(work):
            r = -as_mpf(coeffs[0]) / as_mpf(coeffs[1])
        roots = zero_roots + [(+r, mpf(0))]
        return _finish(p, roots, prec)

    roots_c = _aberth(coeffs, degree, work, prec, max_iter)
    roots = zero_roots + _pair_conjugates(roots_c, prec)
    return _finish(p, roots, prec)


def _finish(p: Poly, roots, prec) -> RootSet:
    work = prec + 32
    fracs = _to_fraction_coeffs(p.coeffs)
    if _HAVE_GMPY2:
        with gmpy2.context(precision=work, allow_complex=True):
            cs = [gmpy2.mpfr(gmpy2.mpq(c.numerator, c.denominator)) for c in fracs]
            norm = max(abs(c) for c in cs)
            worst = gmpy2.mpfr(0)
            for re, im in roots:
                z = gmpy2.mpc(_to_mpfr(re), _to_mpfr(im))
                acc = gmpy2.mpc(0)
                for c in reversed(cs):
                    acc = acc * z + c
                worst = max(worst, abs(acc))
            bound_re, _ = _mpfr_pair_to_mpf(gmpy2.mpc(worst / norm))
            bound = bound_re
    else:
        with mp.workprec(work):
            norm = max(abs(as_mpf(c)) for c in p.coeffs)
            worst = mpf(0)
            for re, im in roots:
                z = mpmath.mpc(re, im)
                acc = mpmath.mpc(0)
                for c in reversed(p.coeffs):
                    acc = acc * z + as_mpf(c)
                worst = max(worst, abs(acc))
            bound = worst / norm
    roots = tuple((+re, +im) for re, im in roots)
    return RootSet(roots, +bound)


def _to_mpfr(x: mpf):
    """Exact mpf -> mpfr conversion inside the active gmpy2 context."""
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return gmpy2.mpfr(0)
    v = gmpy2.mpfr(gmpy2.mpz(man)) * gmpy2.exp2(exp)
    return -v if sign else v


def _pair_conjugates(roots, prec):
    """Force exact conjugate pairs (real coefficients guarantee symmetry)."""
    tol = mpf(2) ** (20 - prec)
    out = []
    used = [False] * len(roots)
    order = sorted(range(len(roots)), key=lambda i: (-abs(roots[i][1]), roots[i][0]))
    for i in order:
        if used[i]:
            continue
        re_i, im_i = roots[i]
        if abs(im_i) <= tol * (1 + abs(re_i)):
            used[i] = True
            out.append((re_i, mpf(0)))
            continue
        best, best_d = None, None
        for j in range(len(roots)):
            if used[j] or j == i:
                continue
            re_j, im_j = roots[j]
            d = abs(re_i - re_j) + abs(im_i + im_j)
            if best is None or d < best_d:
                best, best_d = j, d
        pair_tol = mpf(2) ** (-(prec // 2))
        if best is not None and best_d <= pair_tol * (1 + abs(re_i) + abs(im_i)):
            used[i] = used[best] = True
            re = (re_i + roots[best][0]) / 2
            im = (im_i - roots[best][1]) / 2
            if im < 0:
                im = -im
            out.append((re, im))
            out.append((re, -im))
        else:
            used[i] = True
            out.append((re_i, im_i))
    out.sort(key=lambda z: (z[0], z[1]))
    return out


def _aberth(coeffs, degree, work, prec, max_iter):
    """Simultaneous iteration core; returns list of (re, im) mpf pairs."""
    if _HAVE_GMPY2:
        return _aberth_gmpy2(coeffs, degree, work, prec, max_iter)
    return _aberth_mpmath(coeffs, degree, work, prec, max_iter)


def _log2_mag(q: Fraction):
    if q == 0:
        return None
    return (q.numerator.bit_length() - q.denominator.bit_length()) * 1.0


def _coeff_bulge_bits(coeffs):
    """Height of the coefficient-magnitude profile above its endpoint chord.

    Evaluating the polynomial near its root circles cancels roughly this
    many bits, so it is a sound floor for the working precision.
    """
    logmags = [_log2_mag(abs(c)) for c in coeffs]
    known = [(k, lm) for k, lm in enumerate(logmags) if lm is not None]
    if len(known) < 3:
        return 0
    (x0, y0), (x1, y1) = known[0], known[-1]
    bulge = 0.0
    for k, lm in known[1:-1]:
        chord = y0 + (y1 - y0) * (k - x0) / (x1 - x0)
        bulge = max(bulge, lm - chord)
    return int(bulge)


def _initial_points(coeffs, degree):
    """Deterministic starting points: hull radii x spread angles."""
    logmags = [_log2_mag(abs(c)) for c in coeffs]
    radii_log2 = _upper_hull_radii(logmags, degree)
    # Cap by the Fujiwara bound (log2 form) to avoid absurd starts.
    lead = logmags[-1]
    fuji = max(
        (logmags[k] - lead) / (degree - k)
        for k in range(degree)
        if logmags[k] is not None
    ) + 1.0
    pts = []
    golden = 0.3819660112501051
    for i, rl in enumerate(sorted(radii_log2)):
        rl = min(rl, fuji)
        angle = 2 * math.pi * ((i / degree) + golden * (i + 1) % 1.0) + 0.4
        pts.append((rl, angle))
    return pts


def _aberth_gmpy2(coeffs, degree, work, prec, max_iter):
    # The global ordering phase does not need target precision; start low
    # (but above the cancellation floor) and let the stagnation logic
    # escalate towards `work` and beyond.
    target_work = work
    work = max(192, min(work, max(work // 3 + 128, _coeff_bulge_bits(coeffs) + 128)))
    ctx = gmpy2.context(precision=work, allow_complex=True)
    lowctx = gmpy2.context(precision=96, allow_complex=True)
    n = degree
    z = None
    stall_window = 10
    escalations = 0
    iters_done = 0
    while iters_done < max_iter:
        with ctx:
            cs = [gmpy2.mpfr(gmpy2.mpq(c.numerator, c.denominator)) for c in coeffs]
            if z is None:
                z = []
                for rl, angle in _initial_points(coeffs, degree):
                    r = gmpy2.exp2(gmpy2.mpfr(rl))
                    z.append(gmpy2.mpc(r * math.cos(angle), r * math.sin(angle)))
            else:
                z = [gmpy2.mpc(x) for x in z]
            thresh = gmpy2.exp2(-(prec - 20))
            active = list(range(n))
            recent = []
            checkpoint = (iters_done, n)
            while iters_done < max_iter:
                iters_done += 1
                worst = gmpy2.mpfr(0)
                newton = {}
                for i in active:
                    zi = z[i]
                    pv = gmpy2.mpc(0)
                    dv = gmpy2.mpc(0)
                    for c in reversed(cs):
                        dv = dv * zi + pv
                        pv = pv * zi + c
                    if dv == 0:
                        z[i] = zi * gmpy2.mpfr("1.0000000001") + gmpy2.mpfr("1e-20")
                        newton[i] = None
                        continue
                    newton[i] = pv / dv
                with lowctx:
                    repulse = {}
                    for i in active:
                        zi = z[i]
                        s = gmpy2.mpc(0)
                        for j in range(n):
                            if j != i:
                                d = zi - z[j]
                                if d == 0:
                                    d = gmpy2.mpc(gmpy2.exp2(-work // 2))
                                s += 1 / d
                        repulse[i] = s
                still = []
                for i in active:
                    ni = newton[i]
                    if ni is None:
                        still.append(i)
                        worst = max(worst, gmpy2.mpfr(1))
                        continue
                    denom = 1 - ni * repulse[i]
                    w = ni if denom == 0 else ni / denom
                    z[i] = z[i] - w
                    rel = abs(w) / (1 + abs(z[i]))
                    worst = max(worst, rel)
                    if rel > thresh:
                        still.append(i)
                if not still:
                    # confirmation sweep over everything with plain Newton
                    ok = True
                    for i in range(n):
                        zi = z[i]
                        pv = gmpy2.mpc(0)
                        dv = gmpy2.mpc(0)
                        for c in reversed(cs):
                            dv = dv * zi + pv
                            pv = pv * zi + c
                        if dv != 0:
                            w = pv / dv
                            if abs(w) > thresh * (1 + abs(zi)):
                                z[i] = zi - w
                                ok = False
                    if ok:
                        return [_mpfr_pair_to_mpf(zz) for zz in z]
                    active = list(range(n))
                else:
                    active = still
                # stagnation: corrections locked in at the evaluation-noise
                # floor above the threshold, so more working bits are needed
                recent.append(worst)
                if len(recent) > stall_window:
                    recent.pop(0)
                    locked = worst < gmpy2.exp2(-40) or iters_done > max_iter // 2
                    if worst > thresh and locked and worst > recent[0] / 4:
                        break
                # below target precision, noise can also stall the ordering
                # phase itself: no root frozen for 30 sweeps means the floor
                # is too high to make progress at all
                if work < target_work and iters_done - checkpoint[0] >= 30:
                    if len(active) >= checkpoint[1] and worst > gmpy2.exp2(-16):
                        break
                    checkpoint = (iters_done, len(active))
            else:
                continue
        # escalate and warm-restart from the current approximations
        escalations += 1
        if escalations > 8:
            break
        work += max(96, work // 2)
        ctx = gmpy2.context(precision=work, allow_complex=True)
    raise ConvergenceError(f"Aberth did not converge in {max_iter} iterations")


def _mpfr_pair_to_mpf(z):
    def conv(x):
        if gmpy2.is_zero(x):
            return mpf(0)
        m, e = x.as_mantissa_exp()
        return mpf(int(m)) * mpf(2) ** int(e)

    return conv(z.real), conv(z.imag)


def _aberth_mpmath(coeffs, degree, work, prec, max_iter):
    n = degree
    z = None
    iters_done = 0
    escalations = 0
    stall_window = 10
    while iters_done < max_iter:
        with mp.workprec(work):
            cs = [mpf(c.numerator) / c.denominator for c in coeffs]
            if z is None:
                z = []
                for rl, angle in _initial_points(coeffs, degree):
                    r = mpf(2) ** rl
                    z.append(mpmath.mpc(r * math.cos(angle), r * math.sin(angle)))
            thresh = mpf(2) ** (-(prec - 20))
            recent = []
            while iters_done < max_iter:
                iters_done += 1
                worst = mpf(0)
                for i in range(n):
                    zi = z[i]
                    pv = mpmath.mpc(0)
                    dv = mpmath.mpc(0)
                    for c in reversed(cs):
                        dv = dv * zi + pv
                        pv = pv * zi + c
                    if dv == 0:
                        z[i] = zi * mpf("1.0000000001") + mpf("1e-20")
                        worst = mpf(1)
                        continue
                    ni = pv / dv
                    s = mpmath.mpc(0)
                    for j in range(n):
                        if j != i:
                            d = zi - z[j]
                            if d == 0:
                                d = mpmath.mpc(mpf(2) ** (-work // 2))
                            s += 1 / d
                    denom = 1 - ni * s
                    w = ni if denom == 0 else ni / denom
                    z[i] = zi - w
                    worst = max(worst, abs(w) / (1 + abs(z[i])))
                if worst < thresh:
                    return [(zz.real, zz.imag) for zz in z]
                recent.append(worst)
                if len(recent) > stall_window:
                    recent.pop(0)
                    locked = worst < mpf(2) ** -40 or iters_done > max_iter // 2
                    if locked and worst > recent[0] / 4:
                        break
            else:
                continue
        escalations += 1
        if escalations > 8:
            break
        work += max(96, work // 2)
    raise ConvergenceError(f"Aberth did not converge in {max_iter} iterations")
