"""Exception types shared across the workbench.

Every error a caller can trigger with bad parameters derives from
``DomainError`` (itself a ``ValueError``); the CLI maps that to exit status 1.
"""


class DomainError(ValueError):
    """A parameter lies outside the domain of the requested computation."""


class CapacityError(DomainError):
    """The request needs more table coverage or memory than is available."""


class FactorizationError(DomainError):
    pass


class ConvergenceError(DomainError):
    """A series was requested outside its region of absolute convergence."""


class PoleError(DomainError):
    pass


class PrecisionError(DomainError):
    """The requested accuracy cannot be certified at this point."""


class ZeroTableError(DomainError):
    """Malformed zero table; ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class CoverageError(DomainError):
    """The zero set does not cover the requested height."""
