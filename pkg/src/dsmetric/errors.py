"""Exception types raised by dsmetric.

Every error derives from :class:`ValueError` so callers that only care about
"bad input" can catch that.
"""


class DSMetricError(ValueError):
    """Base class for all dsmetric errors."""


class KernelDomainError(DSMetricError):
    """A point lies outside the domain of the kernel, or is not finite."""


class DegenerateBandwidthError(DSMetricError):
    """The median pairwise distance is zero, so no Gaussian width exists."""


class IncompatibleDataError(DSMetricError):
    """Two datasets (or a dataset and a request) do not fit together."""


class ConvergenceError(DSMetricError):
    """An iterative routine did not reach its tolerance."""


class PreconditionError(DSMetricError):
    """A mathematical precondition (stability, distinct roots, ...) fails."""


class UCRFormatError(DSMetricError):
    """A UCR archive text file could not be parsed."""


class TrajectoryFormatError(DSMetricError):
    """A trajectory CSV file is malformed."""
