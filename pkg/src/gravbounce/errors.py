"""Exception hierarchy shared by all gravbounce modules."""


class GravBounceError(Exception):
    """Base class for all library errors."""


class DomainError(GravBounceError, ValueError):
    """An argument lies outside the supported domain."""


class RootFindingError(GravBounceError, RuntimeError):
    """A root could not be bracketed or refined."""


class QuadratureError(GravBounceError, RuntimeError):
    """Adaptive integration exhausted its budget without converging.

    Attributes
    ----------
    value : float
        Best estimate available when the budget ran out.
    error : float
        Error estimate attached to ``value``.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class ConfigError(GravBounceError, ValueError):
    """Invalid command-line or configuration-file input."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
