"""Exception hierarchy shared across the package.

The CLI maps these onto its stable exit codes; library users can catch the
base class or the specific failure they care about.
"""


class PhotonsimError(Exception):
    """Base class for all photonsim errors."""


class StateParseError(PhotonsimError, ValueError):
    """A state, circuit, matrix or rule file/literal could not be parsed."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}" + (
                f", column {column})" if column is not None else ")")
        super().__init__(message)
        self.line = line
        self.column = column


class CapacityError(PhotonsimError):
    """A computation would exceed a configured size or memory budget."""


class NumericError(PhotonsimError):
    """Numerical contract violation (non-unitary matrix, underflow, ...)."""


class CapabilityError(PhotonsimError):
    """The requested back-end does not support the requested task."""


class EmptyPostSelectionError(PhotonsimError):
    """Post-selection retained zero probability mass."""
