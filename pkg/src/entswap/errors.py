"""Exception types shared across the package."""


class EntswapError(Exception):
    """Base class for every error raised by this package."""


class NotHermitianError(EntswapError):
    """Input matrix fails the Hermiticity tolerance."""


class NoConvergenceError(EntswapError):
    """Eigensolver failed to converge; should never happen for these small matrices."""


class InvalidStateError(EntswapError):
    """Object violates a state-vector or density-matrix invariant."""


class ClosedFormDomainError(EntswapError):
    """Closed-form expression requested outside its domain of validity."""


class DomainError(EntswapError, ValueError):
    """Scalar argument outside the documented domain."""


class StepTooLargeError(EntswapError):
    """Integrator time step is too coarse for the requested dynamics."""


class InvariantViolationError(EntswapError):
    """A conserved quantity degraded beyond tolerance during integration."""


class EngineMismatchError(EntswapError):
    """Requested engine cannot handle the requested configuration."""


class BoundViolationError(EntswapError):
    """A computed state fell outside the negativity-energy bound.

    This signals an implementation bug, not physics: every state reachable
    by the model satisfies the bound exactly.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
