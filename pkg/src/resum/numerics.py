"""Scalar arithmetic layer: exact rationals, big floats and gamma ratios.

Exact rationals are plain ``fractions.Fraction`` values; arbitrary-precision
reals are ``mpmath.mpf`` values computed under an explicit binary working
precision.  Precision is never implicit: every driver chooses its bits through
a :class:`PrecisionPolicy` and runs inside ``mpmath.workprec``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction

import mpmath
from mpmath import mp, mpf, workprec

from .errors import IndeterminateError, PoleError

__all__ = [
    "PrecisionPolicy",
    "DEFAULT_POLICY",
    "as_fraction",
    "as_mpf",
    "gamma",
    "gamma_ratio",
    "half_integer_gamma_parts",
    "is_exact",
    "stable_value",
    "to_decimal",
    "workprec",
]

# Types whose arithmetic is exact; everything else is treated as a big float.
_EXACT_TYPES = (int, Fraction)


def is_exact(x) -> bool:
    """True when ``x`` carries no rounding error (int or Fraction)."""
    return isinstance(x, _EXACT_TYPES)


def as_mpf(x) -> mpf:
    """Convert to mpf at the current working precision."""
    if isinstance(x, mpf):
        return x
    if isinstance(x, int):
        return mpf(x)
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction or mpf (dyadic)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    x = mpmath.mpmathify(x)
    sign, man, exp, _ = x._mpf_
    man = int(man)  # may be gmpy2.mpz under the gmpy backend
    exp = int(exp)
    if man == 0:
        if x == 0:
            return Fraction(0)
        raise ValueError(f"not a finite number: {x!r}")
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working-precision schedule: bits grow linearly with expansion order.

    ``working_bits(N) = base_bits + per_order_bits * N``.  The default 12
    bits/order leaves headroom over the ~10 bits/order coefficient growth of
    the built-in models, so plateau-region cancellations stay resolved.
    """

    base_bits: int = 64
    per_order_bits: int = 12
    guard_check: bool = False

    def __post_init__(self):
        if self.base_bits < 64:
            raise ValueError("base_bits must be >= 64")
        if self.per_order_bits < 0:
            raise ValueError("per_order_bits must be >= 0")

    def working_bits(self, order: int) -> int:
        return self.base_bits + self.per_order_bits * max(order, 0)

    def workprec(self, order: int):
        """Context manager setting the working precision for ``order``."""
        return workprec(self.working_bits(order))


DEFAULT_POLICY = PrecisionPolicy()


def stable_value(fn, bits: int, digits: int):
    """Evaluate ``fn`` at ``bits`` and recheck at 1.5x precision.

    Raises ``ArithmeticError`` when the two results disagree within the first
    ``digits`` significant decimal digits.  This is the guard check of
    :class:`PrecisionPolicy`.
    """
    with workprec(bits):
        first = fn()
    with workprec(bits + bits // 2):
        second = fn()
    if to_decimal(first, digits) != to_decimal(second, digits):
        raise ArithmeticError(
            f"guard check failed at {bits} bits: "
            f"{to_decimal(first, digits)} != {to_decimal(second, digits)}"
        )
    return first


def to_decimal(x, digits: int) -> str:
    """Decimal string of ``x`` with ``digits`` significant digits.

    Rounding is half-even and performed on the exact rational value, so the
    output is deterministic and independent of the binary precision that
    produced ``x`` (as long as ``x`` itself is accurate enough).
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    q = as_fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return str(d)


def _integer_value(x):
    """The exact integer equal to ``x``, or None.

    mpf inputs count as integers when they are exactly dyadic integers; this
    is the "within half an ulp" reading for binary floats, which represent an
    integer either exactly or not at all.
    """
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else None
    x = as_mpf(x)
    if mpmath.isint(x):
        return int(x)
    return None


def _is_gamma_pole(x) -> bool:
    n = _integer_value(x)
    return n is not None and n <= 0


def _signed_log_gamma(x):
    """(log|Gamma(x)|, sign) for real non-pole ``x``."""
    x = as_mpf(x)
    if x > 0:
        return mpmath.loggamma(x), 1
    # Reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x)).
    s = mpmath.sinpi(x)
    logabs = mpmath.log(mp.pi) - mpmath.log(abs(s)) - mpmath.loggamma(1 - x)
    return logabs, (1 if s > 0 else -1)


def gamma(x) -> mpf:
    """Gamma(x) at the current working precision.

    Raises :class:`PoleError` at non-positive integers.
    """
    if _is_gamma_pole(x):
        raise PoleError(f"gamma pole at {x}")
    with mp.extraprec(20):
        value = mpmath.gamma(as_mpf(x))
    return +value


def gamma_ratio(a, b, c) -> mpf:
    """Gamma(a) / (Gamma(b) * Gamma(c)) with pole bookkeeping.

    A pole in a denominator factor makes the ratio an exact zero as long as
    everything else stays finite.  Computed through signed log-gamma, so huge
    intermediate factorials cannot overflow.
    """
    pole_a = _is_gamma_pole(a)
    pole_b = _is_gamma_pole(b)
    pole_c = _is_gamma_pole(c)
    if pole_a and (pole_b or pole_c):
        raise IndeterminateError(
            f"gamma poles in numerator and denominator: a={a}, b={b}, c={c}"
        )
    if pole_a:
        raise PoleError(f"gamma pole in numerator at {a}")
    if pole_b or pole_c:
        return mpf(0)

    with mp.extraprec(40):
        la, sa = _signed_log_gamma(a)
        lb, sb = _signed_log_gamma(b)
        lc, sc = _signed_log_gamma(c)
        value = sa * sb * sc * mpmath.exp(la - lb - lc)
    value = +value

    # Integer inputs have an integer-valued ratio (a binomial times integer
    # factors); snap when the log-gamma route lands within rounding slop of
    # an integer that the current precision can represent exactly.
    ia, ib, ic = _integer_value(a), _integer_value(b), _integer_value(c)
    if ia is not None and ib is not None and ic is not None and value != 0:
        nearest = mpmath.nint(value)
        if nearest != 0 and abs(value / nearest - 1) <= mpf(2) ** (16 - mp.prec):
            if abs(mpmath.mag(nearest)) <= mp.prec:
                return nearest
    return value


def half_integer_gamma_parts(j: int) -> Fraction:
    """Rational r with Gamma(j + 1/2) = r * sqrt(pi), any integer j."""
    if j >= 0:
        return Fraction(math.factorial(2 * j), 4**j * math.factorial(j))
    k = -j
    return Fraction((-4) ** k * math.factorial(k), math.factorial(2 * k))
