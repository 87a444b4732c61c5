"""Resummation toolkit for divergent asymptotic series.

Arbitrary-precision machinery for the order-dependent binomial transform,
correction-reduction operators, stationary-point (minimum-sensitivity)
estimation and Pade extrapolation, with two built-in case studies: a
Laplace-integral toy function and the quartic anharmonic oscillator
ground-state energy.
"""

from .errors import (
    ConvergenceError,
    DegenerateError,
    DivisionByZeroSeries,
    DomainError,
    IndeterminateError,
    NoCandidate,
    NoStationaryPoint,
    PoleError,
    RangeError,
    ResumError,
)
from .numerics import DEFAULT_POLICY, PrecisionPolicy, gamma, gamma_ratio, to_decimal
from .series import GenSeries, ReductionOp, apply_reduction, evaluate, log_derivative, taylor_div
from .transform import TransformSpec, binom_factor, binomial_transform, factor_ratio, lde_factor
from .polyroot import Poly, RootSet, all_roots, positive_real_roots
from .estimate import Criterion, Estimate
from .pade import (
    PadeApprox,
    limit_at_infinity,
    near_cancelling_pairs,
    near_diagonal_stationary,
    zero_pole_map,
)
from . import anharmonic, laplace, pade  # noqa: F401  (pade stays the module)

__version__ = "0.1.0"
