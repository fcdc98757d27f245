"""Exception hierarchy shared across the package."""


class MofweError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MofweError, ValueError):
    """An argument lies outside the domain of the function."""


class ParameterError(DomainError):
    """A distribution parameter is invalid (non-positive, non-finite)."""


class NumericalError(MofweError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy value."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach its requested tolerance."""

    def __init__(self, message, *, value=None, abserr=None, diagnostics=None):
        super().__init__(message)
        self.value = value
        self.abserr = abserr
        self.diagnostics = diagnostics or {}


class NoInteriorModeError(NumericalError):
    """The log-density derivative has no sign change inside the search bracket."""


class SeriesDomainError(DomainError):
    """A series expansion is used outside the region where it converges."""


class SeriesDivergenceError(NumericalError):
    """Partial sums of a series blew up or became non-finite."""

    def __init__(self, message, *, trace=None, at=None):
        super().__init__(message)
        self.trace = list(trace or [])
        self.at = at


class LikelihoodError(NumericalError):
    """A log-likelihood contribution is not finite."""

    def __init__(self, message, *, index=None):
        super().__init__(message)
        self.index = index


class InferenceUnavailableError(MofweError):
    """Covariance-based inference was requested but no covariance exists."""


class DataError(MofweError, ValueError):
    """Input data is malformed, empty or outside the positive half-line."""
