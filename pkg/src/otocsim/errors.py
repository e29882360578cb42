"""Exception hierarchy shared across the package.

``ConfigError`` maps to CLI exit code 2, ``NumericalError`` (and subclasses)
to exit code 3.
"""


class OtocsimError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(OtocsimError):
    """A configuration file, flag or parameter combination is invalid."""


class NumericalError(OtocsimError):
    """A numerical routine failed or was asked for something it cannot do."""


class DimensionCapError(NumericalError):
    """A dense/spectral routine was asked to exceed its dimension cap."""


class KrylovConvergenceError(NumericalError):
    """The Lanczos propagator could not reach the requested tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
