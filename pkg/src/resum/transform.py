"""Order-dependent binomial transform and the delta-expansion factor map.

The transform multiplies the coefficient of (1/M)**s by
Gamma(N+1) / (Gamma(s+1) * Gamma(N-s+1)) and relabels 1/M -> t.  Integer s
gives exact binomials (zero outside 0..N); half-integer s gives an exact
rational divided by pi; anything else goes through the signed log-gamma
ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import RangeError
from .numerics import as_mpf, gamma_ratio, half_integer_gamma_parts
from .series import GenSeries

__all__ = [
    "TransformSpec",
    "binom_factor",
    "binomial_transform",
    "lde_factor",
    "factor_ratio",
]


@dataclass(frozen=True)
class TransformSpec:
    """Transform order plus a human-readable variable relabeling note."""

    N: int
    variable_map: str = "1/M -> t"

    def __post_init__(self):
        if self.N < 0:
            raise RangeError("transform order must be >= 0")


def _rational_over_pi(q: Fraction) -> mpf:
    with mp.extraprec(20):
        value = mpf(q.numerator) / q.denominator / mp.pi
    return +value


def binom_factor(N: int, s):
    """Generalized binomial factor Gamma(N+1)/(Gamma(s+1)Gamma(N-s+1)).

    Returns an exact Fraction for integer s (including the exact zeros
    outside 0..N) and an mpf otherwise.
    """
    if N < 0:
        raise RangeError("N must be >= 0")
    s = Fraction(s)
    if s.denominator == 1:
        k = s.numerator
        if 0 <= k <= N:
            return Fraction(math.comb(N, k))
        return Fraction(0)
    if s.denominator == 2:
        # Gamma(s+1) = Gamma(j1 + 1/2), Gamma(N-s+1) = Gamma(j2 + 1/2):
        # the two sqrt(pi) factors combine into a single pi.
        j1 = (s.numerator + 1) // 2
        j2 = N - (s.numerator - 1) // 2
        r = Fraction(math.factorial(N)) / (
            half_integer_gamma_parts(j1) * half_integer_gamma_parts(j2)
        )
        return _rational_over_pi(r)
    return gamma_ratio(N + 1, s + 1, N - s + 1)


def binomial_transform(s: GenSeries, spec: TransformSpec) -> GenSeries:
    """Apply the transform termwise; factors that vanish drop their terms.

    Each exponent is read as the power of 1/M and carried over unchanged as
    the power of t.
    """
    if s.order_N != spec.N:
        raise RangeError(
            f"series order {s.order_N} does not match transform order {spec.N}"
        )
    out = []
    for e, (_, c) in zip(s.exponents(), s.terms):
        factor = binom_factor(spec.N, e)
        if factor == 0:
            continue
        if isinstance(factor, Fraction) and isinstance(c, (int, Fraction)):
            out.append((e, Fraction(c) * factor))
        else:
            out.append((e, as_mpf(c) * as_mpf(factor)))
    return GenSeries(tuple(out), Fraction(0), s.order_N)


def lde_factor(N: int, n: int) -> Fraction:
    """Delta-expansion factor Gamma(N+(n+1)/2)/(Gamma((3n+1)/2)Gamma(N-n+1)).

    Always an exact positive rational: for even n the half-integer gamma
    pair cancels its sqrt(pi) factors.
    """
    if not 0 <= n <= N:
        raise RangeError(f"need 0 <= n <= N, got n={n}, N={N}")
    if n % 2 == 1:
        top = math.factorial(N + (n + 1) // 2 - 1)
        bottom = math.factorial((3 * n + 1) // 2 - 1) * math.factorial(N - n)
        return Fraction(top, bottom)
    r1 = half_integer_gamma_parts(N + n // 2)
    r2 = half_integer_gamma_parts(3 * n // 2)
    return r1 / (r2 * math.factorial(N - n))


def factor_ratio(N: int, n: int) -> mpf:
    """Ratio of the binomial factor at s=(3n-1)/2 to the delta factor."""
    c = lde_factor(N, n)
    b = binom_factor(N, Fraction(3 * n - 1, 2))
    if isinstance(b, Fraction):
        q = b / c
        with mp.extraprec(10):
            value = mpf(q.numerator) / q.denominator
        return +value
    return b / mpf(c.numerator) * c.denominator
