"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A value lies outside the documented domain of an operation."""


class UnsupportedKernelError(ValueError):
    """The requested operation is not defined for this reservoir kind."""


class GrowingEnvelopeError(UnsupportedKernelError):
    """The kernel's first Taylor coefficient is positive, which would make
    the slow envelope grow; decaying reservoirs never do this, so it signals
    a bad kernel definition rather than a parameter choice."""


class InstabilityError(RuntimeError):
    """The time stepper produced an unphysical amplitude; retry with a
    smaller step."""


class SingularityError(RuntimeError):
    """Evaluation was requested inside the guard band of a dissipator
    singularity.  The offending singularity time is attached."""

    def __init__(self, message, location):
        super().__init__(message)
        self.location = location
