"""Exception hierarchy shared by every module of the package."""


class InfoBoundsError(Exception):
    """Base class for all package errors."""


class ValidationError(InfoBoundsError, ValueError):
    """A distribution or event failed validation."""


class NegativeMass(ValidationError):
    pass


class SumNotOne(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class IndexOutOfRange(InfoBoundsError, IndexError):
    pass


class DomainError(InfoBoundsError, ValueError):
    """A scalar argument lies outside the domain of the function."""


class SupportViolation(InfoBoundsError, ValueError):
    """``p`` is not absolutely continuous with respect to ``q``."""


class AlphaTooSmall(InfoBoundsError, ValueError):
    """An explicit alpha is below max_y P_X(E_y)."""


class DegenerateInstance(InfoBoundsError, RuntimeError):
    pass


class MissingEvent(ValidationError):
    """A bound was requested for an instance without an event mask."""
