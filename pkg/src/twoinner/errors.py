"""Exception types shared across the package."""

from __future__ import annotations


class TwoInnerError(Exception):
    """Base class for every error raised by :mod:`twoinner`."""


class DimensionError(TwoInnerError, ValueError):
    def __init__(self, expected: int, got: int, what: str = "vector"):
        self.expected = expected
        self.got = got
        super().__init__(f"dimension mismatch: space has dim {expected}, {what} has dim {got}")


class ModeError(TwoInnerError, ValueError):
    """Operation is not defined for the field (real/complex) of the space."""


class PreconditionError(TwoInnerError, ValueError):
    """A documented precondition of an operation does not hold."""


class ConsistencyError(TwoInnerError, ArithmeticError):
    """A computed value contradicts a structural property of the form.

    Raised e.g. when ``(x, x | z)`` comes out clearly negative, which can only
    happen if the base inner product is broken.
    """
