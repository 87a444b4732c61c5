"""Exception types shared across the toolkit."""


class ResumError(Exception):
    """Base class for all toolkit errors."""


class PoleError(ResumError, ValueError):
    """Gamma function evaluated at a non-positive integer."""


class IndeterminateError(ResumError, ValueError):
    """Gamma ratio with poles in both numerator and denominator."""


class DomainError(ResumError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(ResumError, ValueError):
    """Index or shape argument outside the supported range."""


class DivisionByZeroSeries(ResumError, ZeroDivisionError):
    """Formal division by an identically zero series."""


class ConvergenceError(ResumError, ArithmeticError):
    """An iterative solver exhausted its iteration budget."""


class DegenerateError(ResumError, ArithmeticError):
    """A linear system required by the operation is singular."""


class NoStationaryPoint(ResumError, ArithmeticError):
    """No positive real stationary point exists for the approximant."""


class NoCandidate(ResumError, ArithmeticError):
    """Neither derivative produced a usable estimation point."""
