"""Estimate record shared by the stationary-point and Pade estimators."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from mpmath import mpf

from .numerics import to_decimal


class Criterion(str, Enum):
    STATIONARY = "stationary"
    INFLECTION = "inflection"
    PLATEAU_TOP = "plateau_top"
    PADE_LIMIT = "pade_limit"


@dataclass(frozen=True)
class Estimate:
    """A single resummation estimate and how it was selected."""

    value: mpf
    location_t: mpf
    criterion: Criterion
    first_deriv: mpf
    second_deriv: mpf
    order_N: int
    L: int = 0
    flags: tuple = field(default_factory=tuple)

    def to_json_data(self, digits: int = 30):
        return {
            "value": to_decimal(self.value, digits),
            "location_t": to_decimal(self.location_t, digits),
            "criterion": self.criterion.value,
            "first_deriv": to_decimal(self.first_deriv, digits),
            "second_deriv": to_decimal(self.second_deriv, digits),
            "order_N": self.order_N,
            "L": self.L,
            "flags": list(self.flags),
        }


def plateau_top(candidates, tie_rel=mpf("1e-3")):
    """Pick the flattest candidate; ties within tie_rel go to the largest t.

    ``candidates`` is a list of tuples whose first two entries are (t, score);
    the full winning tuple is returned.  Scores are non-negative magnitudes of
    the sensitivity derivative at each candidate point.
    """
    if not candidates:
        raise ValueError("no candidates")
    best_score = min(c[1] for c in candidates)
    window = best_score + tie_rel * abs(best_score)
    tied = [c for c in candidates if c[1] <= window]
    return max(tied, key=lambda c: c[0])
