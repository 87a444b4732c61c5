"""Truncated generalized power series with exact rational exponents.

A :class:`GenSeries` is a finite sum ``t**p * sum_i c_i * t**e_i`` with
strictly increasing rational exponents ``e_i`` and an optional overall
prefactor exponent ``p`` carried symbolically.  Coefficients stay exact
(int/Fraction) until a transcendental factor forces a big float.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DivisionByZeroSeries, DomainError
from .numerics import as_fraction, as_mpf, is_exact, to_decimal

__all__ = ["GenSeries", "ReductionOp", "evaluate", "log_derivative",
           "apply_reduction", "taylor_div", "series_to_json"]


def _coeff_is_zero(c) -> bool:
    return c == 0


def _scale(c, q: Fraction):
    """c * q keeping exact coefficients exact."""
    if is_exact(c):
        return Fraction(c) * q
    return (c * q.numerator) / q.denominator


@dataclass(frozen=True)
class GenSeries:
    """Sorted, duplicate-free term list plus prefactor and origin order."""

    terms: tuple = ()
    prefactor_exponent: Fraction = Fraction(0)
    order_N: int = 0

    def __post_init__(self):
        merged = {}
        for exponent, coeff in self.terms:
            e = Fraction(exponent)
            if e in merged:
                merged[e] = merged[e] + coeff
            else:
                merged[e] = coeff
        cleaned = tuple(
            (e, merged[e]) for e in sorted(merged) if not _coeff_is_zero(merged[e])
        )
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "prefactor_exponent", Fraction(self.prefactor_exponent))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self):
        """Full exponents including the prefactor."""
        return tuple(self.prefactor_exponent + e for e, _ in self.terms)

    def coeff(self, exponent) -> object:
        """Coefficient at a full exponent (0 when absent)."""
        want = Fraction(exponent) - self.prefactor_exponent
        for e, c in self.terms:
            if e == want:
                return c
        return 0

    def scaled(self, q) -> "GenSeries":
        q = Fraction(q)
        return GenSeries(
            tuple((e, _scale(c, q)) for e, c in self.terms),
            self.prefactor_exponent,
            self.order_N,
        )

    def __add__(self, other: "GenSeries") -> "GenSeries":
        if self.prefactor_exponent != other.prefactor_exponent:
            # Fold prefactors into the exponents before mixing grids.
            left = self.absorbed()
            right = other.absorbed()
            return left + right
        if self.order_N != other.order_N and self.order_N and other.order_N:
            raise ValueError("cannot add series of different origin order")
        return GenSeries(
            self.terms + other.terms,
            self.prefactor_exponent,
            max(self.order_N, other.order_N),
        )

    def absorbed(self) -> "GenSeries":
        """Equivalent series with the prefactor folded into the exponents."""
        if self.prefactor_exponent == 0:
            return self
        p = self.prefactor_exponent
        return GenSeries(tuple((e + p, c) for e, c in self.terms), Fraction(0), self.order_N)


@dataclass(frozen=True)
class ReductionOp:
    """Product of (1 + d/dlog t / p_i) factors; empty list is the identity."""

    exponents: tuple = field(default_factory=tuple)

    def __post_init__(self):
        ps = tuple(Fraction(p) for p in self.exponents)
        if any(p == 0 for p in ps):
            raise ValueError("reduction exponents must be nonzero")
        object.__setattr__(self, "exponents", ps)


def evaluate(s: GenSeries, t) -> mpf:
    """Numerical value of the series at t > 0 at working precision."""
    t = as_mpf(t)
    if not t > 0:
        raise DomainError(f"series evaluation requires t > 0, got {t}")
    if s.is_zero:
        return mpf(0)

    exps = s.exponents()
    with mp.extraprec(20):
        if all(e.denominator == 1 and e >= 0 for e in exps):
            # Dense Horner on the integer grid.
            top = max(e.numerator for e in exps)
            dense = [mpf(0)] * (top + 1)
            for e, (_, c) in zip(exps, s.terms):
                dense[e.numerator] += as_mpf(c)
            acc = mpf(0)
            for c in reversed(dense):
                acc = acc * t + c
            return +acc

        logt = mpmath.log(t)
        total = mpf(0)
        for e, (_, c) in zip(exps, s.terms):
            if e == 0:
                total += as_mpf(c)
            else:
                power = mpmath.exp((mpf(e.numerator) / e.denominator) * logt)
                total += as_mpf(c) * power
    return +total


def log_derivative(s: GenSeries) -> GenSeries:
    """d/dlog t: each term picks up its full exponent as a factor."""
    p = s.prefactor_exponent
    return GenSeries(
        tuple((e, _scale(c, p + e)) for e, c in s.terms if p + e != 0),
        p,
        s.order_N,
    )


def apply_reduction(op: ReductionOp, s: GenSeries) -> GenSeries:
    """Apply the correction-subtraction product factor by factor.

    The factor with parameter p multiplies the coefficient at full exponent e
    by (1 + e/p), so it annihilates exactly the exponent e = -p.
    """
    out = s
    for p in op.exponents:
        pref = out.prefactor_exponent
        out = GenSeries(
            tuple((e, _scale(c, 1 + (pref + e) / p)) for e, c in out.terms),
            pref,
            out.order_N,
        )
    return out


def _common_step(*series: GenSeries) -> Fraction:
    """Grid step: gcd of all exponent offsets between and within operands."""
    exps = [e for s in series for e in s.exponents()]
    base = exps[0]
    g = Fraction(0)
    for e in exps[1:]:
        d = e - base
        if d == 0:
            continue
        if not g:
            g = abs(d)
        else:
            g = Fraction(
                math.gcd(g.numerator * d.denominator, d.numerator * g.denominator),
                g.denominator * d.denominator,
            )
    return g if g else Fraction(1)


def taylor_div(numer: GenSeries, denom: GenSeries, order: int) -> GenSeries:
    """Formal power-series quotient through ``order`` grid steps."""
    if denom.is_zero:
        raise DivisionByZeroSeries("division by the zero series")
    if numer.is_zero:
        return GenSeries((), Fraction(0), max(numer.order_N, denom.order_N))

    step = _common_step(numer, denom)
    n0 = numer.exponents()[0]
    d0 = denom.exponents()[0]

    def dense(s: GenSeries, lowest: Fraction, length: int):
        out = [0] * length
        for e, (_, c) in zip(s.exponents(), s.terms):
            idx = (e - lowest) / step
            if idx.denominator != 1:
                raise ValueError("operands are not on a common exponent grid")
            if 0 <= idx.numerator < length:
                out[idx.numerator] = out[idx.numerator] + c
        return out

    length = order + 1
    a = dense(numer, n0, length)
    b = dense(denom, d0, length)
    exact = all(is_exact(x) for x in a + b)
    if not exact:
        a = [as_mpf(x) for x in a]
        b = [as_mpf(x) for x in b]
        q = [mpf(0)] * length
    else:
        a = [Fraction(x) for x in a]
        b = [Fraction(x) for x in b]
        q = [Fraction(0)] * length
    for k in range(length):
        acc = a[k]
        for j in range(1, k + 1):
            acc = acc - b[j] * q[k - j]
        q[k] = acc / b[0]

    offset = n0 - d0
    return GenSeries(
        tuple((offset + i * step, q[i]) for i in range(length)),
        Fraction(0),
        max(numer.order_N, denom.order_N),
    )


def series_to_json(s: GenSeries, digits: int = 30) -> str:
    """JSON rendering: exponents as "p/q", coefficients as decimal strings."""
    terms = []
    for e, (_, c) in zip(s.exponents(), s.terms):
        entry = {
            "exponent": f"{e.numerator}/{e.denominator}",
            "coeff": to_decimal(c, digits),
            "exact": is_exact(c),
        }
        if is_exact(c):
            q = Fraction(c)
            entry["rational"] = f"{q.numerator}/{q.denominator}"
        terms.append(entry)
    return json.dumps(
        {
            "prefactor_exponent": f"{s.prefactor_exponent.numerator}/{s.prefactor_exponent.denominator}",
            "order_N": s.order_N,
            "terms": terms,
        },
        indent=2,
        sort_keys=True,
    )
