"""Exception hierarchy shared by every module."""


class EpiopticError(Exception):
    """Base class for all package errors."""


class DomainError(EpiopticError, ValueError):
    """An argument lies outside the domain of the function."""


class ConfigurationError(EpiopticError, ValueError):
    """Inconsistent solver or scenario configuration."""


class DivergenceError(EpiopticError, ArithmeticError):
    """Integration produced a non-finite state."""

    def __init__(self, time, message=None):
        self.time = time
        super().__init__(message or f"non-finite state at t={time!r}")


class BracketError(EpiopticError, ValueError):
    """The supplied interval does not bracket a root or a minimum."""


class NoRealRootError(EpiopticError, ArithmeticError):
    """The closed-form discriminant is negative."""


class DegenerateError(EpiopticError, ArithmeticError):
    """A closed-form denominator vanishes."""
