"""Exception and warning types shared across the package."""


class GridMismatchError(ValueError):
    """Two grid quantities were combined on incompatible grids."""


class DegenerateBasisError(RuntimeError):
    """Gram matrix of a tangent basis is too ill-conditioned to invert."""

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class DegenerateSymplecticFormError(RuntimeError):
    """The restricted symplectic form is singular on the given basis.

    Expected whenever the basis contains a direction that is isotropic for
    the imaginary part of the inner product (e.g. a lone real span).
    """

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class AccuracyError(RuntimeError):
    """A quadrature or integration accuracy requirement was violated."""


class SupportError(ValueError):
    """A wave packet does not fit inside the computational box."""


class SupportWarning(UserWarning):
    """A wave packet is close to the boundary of the computational box."""


class StabilityWarning(UserWarning):
    """A time step does not safely resolve the fastest kinetic phase."""


class ConfigError(ValueError):
    """Scenario configuration failed validation."""


class NumericalError(RuntimeError):
    """A numerical consistency check failed during evaluation."""
