"""Exception types shared across the package."""


class RobinSpectraError(Exception):
    """Base class for all package errors."""


class DomainError(RobinSpectraError, ValueError):
    """Argument outside the domain of a function (e.g. x <= 0 for K_m)."""


class SingularCoordinatesError(RobinSpectraError, ValueError):
    """The Jacobian factor 1 - u*gamma vanishes or changes sign."""


class RegimeError(RobinSpectraError, ValueError):
    """Inputs violate the regime in which a root is known to be unique."""


class NoBoundStateError(RobinSpectraError, ValueError):
    """The spectral condition has no solution for the given parameters."""


class DefinitenessError(RobinSpectraError, ValueError):
    """Mass matrix is not positive definite."""


class GeometryError(RobinSpectraError, ValueError):
    """Unsupported or inconsistent geometry."""


class ConvergenceError(RobinSpectraError, RuntimeError):
    """Iterative solver failed to reach the requested residual."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class RangeError(RobinSpectraError, OverflowError):
    """Result not representable in double precision."""
