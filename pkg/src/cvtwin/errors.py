"""Exception types shared across the package."""


class CvTwinError(Exception):
    """Base class for all package-specific errors."""


class SingularSystem(CvTwinError):
    """The atomic-fluctuation linear system is numerically singular.

    Raised when the condition estimate of the 9x9 steady-state matrix
    exceeds the configured guard, which signals a degenerate parameter
    point (e.g. zero fields with no ground-state relaxation).
    """


class IntegrationFailure(CvTwinError):
    """The adaptive integrator could not reach the requested endpoint."""


class NonPhysical(CvTwinError):
    """A computed quantity violates a physical bound beyond tolerance.

    Flags upstream matrix errors, e.g. an inseparability value below
    -1e-8 coming out of a second-moment matrix.
    """


class DomainError(CvTwinError):
    """Inputs are outside the validity domain of a closed-form expression."""


class NoImprovement(CvTwinError):
    """Every seed evaluation of an optimization objective failed."""


class ConfigError(CvTwinError):
    """A scenario configuration violates the schema."""
