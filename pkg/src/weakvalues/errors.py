"""Exception types shared across the package."""


class WeakValueError(Exception):
    """Base class for all errors raised by :mod:`weakvalues`."""


class ZeroPostSelection(WeakValueError):
    """The post-selection has (numerically) zero overlap with the state."""


class DomainTooSmall(WeakValueError):
    """A grid function does not decay at the grid edges."""


class UnsupportedFamily(WeakValueError):
    """The requested operation has no implementation for this pointer family."""


class ContractViolation(WeakValueError):
    """A numerical contract was broken, e.g. an expectation of a Hermitian
    observable came back with a non-negligible imaginary part."""


class ConfigError(WeakValueError):
    """Invalid scenario configuration."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
