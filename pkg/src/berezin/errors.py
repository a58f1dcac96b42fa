"""Exception hierarchy shared by every module."""


class BerezinError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(BerezinError, ValueError):
    """Invalid model, grid or run configuration."""


class DomainError(BerezinError, ValueError):
    """A disk point lies outside the allowed region."""


class UsageError(BerezinError, ValueError):
    """Arguments are incompatible (shape, space or kind mismatch)."""


class SingularityError(BerezinError, ArithmeticError):
    """An operator is too close to singular to invert."""


class NumericalConsistencyError(BerezinError, ArithmeticError):
    """Two evaluation paths of the same quantity disagree beyond tolerance."""
