"""Exception types shared across the package."""


class MnGapError(Exception):
    """Base class for all package-specific errors."""


class ArgumentError(MnGapError, ValueError):
    """Malformed or inconsistent arguments (bad grid, bad counts, ...)."""


class DomainError(MnGapError, ValueError):
    """A value lies outside the mathematical domain of an operation."""


class RegimeError(MnGapError, ValueError):
    """An operation was requested outside the coupling regime it is defined for."""


class TruncationError(MnGapError, RuntimeError):
    """The integration domain is too short for the requested truncation tolerance.

    Carries ``min_y_max``, the smallest admissible upper integration limit
    for the failed request.
    """

    def __init__(self, message: str, min_y_max: float):
        super().__init__(message)
        self.min_y_max = float(min_y_max)


class PrecisionWarning(UserWarning):
    """Result is returned but its accuracy is likely degraded."""
