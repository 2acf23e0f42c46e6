"""Exception types shared across the package."""


class QuantestError(Exception):
    """Base class for all package-specific errors."""


class DomainError(QuantestError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConvergenceError(QuantestError, RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance."""


class NumericalError(QuantestError, RuntimeError):
    """A quadrature or inversion step produced an unusable result."""
