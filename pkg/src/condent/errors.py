"""Exception types raised by condent."""


class CondentError(ValueError):
    """Base class for all input/validation errors."""


class InvalidStateError(CondentError):
    """A matrix is not a valid density matrix (Hermitian, unit trace, PSD)."""


class InvalidDistributionError(CondentError):
    """A probability vector or joint distribution is malformed."""


class InvalidParametersError(CondentError):
    """State-family parameters do not yield a valid state."""


class InvalidBlochError(CondentError):
    """A Bloch representation reconstructs to a non-positive matrix."""


class InvalidMeasurementError(CondentError):
    """A POVM fails completeness, positivity or normalization."""


class UnsupportedMeasurementError(CondentError):
    """The operation is not defined for the supplied kind of measurement."""


class DomainError(CondentError):
    """An argument lies outside the domain of the operation."""
