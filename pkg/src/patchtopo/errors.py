"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: DataError -> 2, NumericalError -> 3,
anything else -> 3.
"""


class PatchTopoError(Exception):
    """Base class for all package errors."""


class DataError(PatchTopoError):
    """Malformed, missing, or inconsistent input data."""


class NumericalError(PatchTopoError):
    """A computation cannot proceed (degenerate geometry, empty result, ...)."""
