"""Exception hierarchy shared by every module of the package."""


class AgingModelError(Exception):
    """Base class for all errors raised by :mod:`agingmetric`."""


class DomainError(AgingModelError, ValueError):
    """An input lies outside the mathematical domain of an operation.

    Examples are a non-positive-definite metric, a matrix logarithm of a
    tensor with a non-positive eigenvalue, or a rod state outside the
    admissible region of its dynamical system.
    """

    def __init__(self, message, distance=None):
        super().__init__(message)
        #: Signed distance to the admissibility boundary when one is known.
        self.distance = distance


class NoConnectionError(AgingModelError):
    """A heteroclinic (kink) connection could not be bracketed."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        #: Parameter interval over which the shooting defect kept one sign.
        self.interval = interval


class ConfigError(AgingModelError, ValueError):
    """A scenario configuration file is malformed or inconsistent."""


class NumericalFailure(AgingModelError, RuntimeError):
    """A numerical procedure produced non-finite or unusable output."""
