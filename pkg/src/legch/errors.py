"""Exception types shared across the package.

Each exception class maps to one CLI exit code class: input problems exit 2,
validation failures exit 1, budget overruns exit 3.
"""


class LegchError(Exception):
    """Base class for all package errors."""


class InputError(LegchError):
    """Malformed input (plat file, DGA file, curve file, bad flag value)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
            message = message + where
        super().__init__(message)


class SignatureError(LegchError):
    """Two elements from incompatible algebras were combined."""


class ValidationError(LegchError):
    """A defining identity failed (degree, action filtration, connectivity, d^2)."""


class InvalidMoveError(LegchError):
    """A tame-automorphism or stabilization move violated its precondition."""


class BudgetError(LegchError):
    """A configured search budget cannot certify a complete answer."""


class NotChordGenericError(LegchError):
    """Numeric chord detection found a one-parameter chord family."""
