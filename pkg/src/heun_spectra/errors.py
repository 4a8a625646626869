"""Exception hierarchy shared by all solver modules."""


class HeunSpectraError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HeunSpectraError, ValueError):
    """Input outside the mathematical domain of an operation."""


class AsymptoticRegimeError(HeunSpectraError):
    """Asymptotic regime not reached at the requested evaluation point.

    Carries the achieved relative error estimate so callers can move the
    evaluation point (larger z for the infinity-side series, smaller z for
    the zero-side one) and retry.
    """

    def __init__(self, message, z=None, error_estimate=None):
        super().__init__(message)
        self.z = z
        self.error_estimate = error_estimate


class AnnulusError(HeunSpectraError):
    """Laurent window too narrow for a reliable evaluation; increase N."""


class IndexSearchError(HeunSpectraError):
    """No Floquet index found in the search region."""


class DegeneracyError(HeunSpectraError):
    """Null space of a matching problem is not one-dimensional."""


class SolverError(HeunSpectraError):
    """Eigenvalue search or ODE integration failed."""
