"""
Steerwave Errors - Exception types raised across the package.

Every error is a ValueError so callers that only know the builtin keep working;
field-file errors are additionally OSErrors.
"""


class SteerwaveError(ValueError):
    """Base class for all steerwave errors."""


class GridError(SteerwaveError):
    """Invalid grid parameters, or fields living on different grids."""


class IndexRangeError(IndexError, SteerwaveError):
    """A frequency-bin index outside [0, N)."""


class AxisError(SteerwaveError):
    """A Riesz axis outside 1..d."""


class NumericError(ArithmeticError, SteerwaveError):
    """Non-finite multiplier values or a non-real inverse transform."""


class MultiIndexError(SteerwaveError):
    """A malformed multi-index or one of the wrong order."""


class ConfigError(SteerwaveError):
    """An invalid window, frame or run configuration."""


class InsufficientDataError(SteerwaveError):
    """Too few usable samples for a fit or a spectral probe."""


class FieldIOError(OSError, SteerwaveError):
    """Base class for field-file problems."""


class FieldHeaderError(FieldIOError):
    """Malformed, incomplete or unsupported field header."""


class FieldShapeError(FieldIOError):
    """Header shape inconsistent with its grid, or a payload that is too long."""


class FieldDtypeError(FieldIOError):
    """Header dtype differs from the requested field kind."""


class FieldTruncatedError(FieldIOError):
    """Payload shorter than the header declares."""
