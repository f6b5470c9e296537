"""Exception types shared across the package."""


class QspecError(Exception):
    """Base class for all qspec errors."""


class InvariantViolation(QspecError):
    """A domain-type invariant failed validation.

    ``name`` identifies the violated invariant so that config-level error
    messages can point at the offending field.
    """

    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.name = name


class PoleProximityError(QspecError):
    """Frequency too close to a pole of the susceptibility.

    Callers that need a value at or near the pole should use the
    limit-aware response evaluation instead.
    """


class InvalidPulseError(QspecError):
    """Pulse specification has a non-positive scale parameter."""


class ZeroFieldError(QspecError):
    """Cannot normalize a field with zero (or non-finite) norm."""


class WindowTooSmallError(QspecError):
    """Requested frequency window does not cover all spectral features."""


class GridTooCoarseError(QspecError):
    """Time grid spacing too coarse to resolve the emitter dynamics."""


class NoRootCertifiedError(QspecError):
    """Root existence preconditions fail (no eigenstate overlaps the
    coupling vector), so no root can be certified."""


class OptimizerFailureError(QspecError):
    """Global extremum search could not certify its result."""


class StepTooLargeWarning(UserWarning):
    """Finite-difference step fails the Richardson consistency check."""
