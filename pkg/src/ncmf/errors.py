"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class NcmfError(Exception):
    """Base class for all library errors."""


# scalar
class DivisionByZero(NcmfError, ZeroDivisionError):
    pass


class MixedFields(NcmfError, TypeError):
    pass


# algebra
class InhomogeneousInput(NcmfError, ValueError):
    pass


class MixedAlgebras(NcmfError, TypeError):
    pass


class RelationNotPreserved(NcmfError, ValueError):
    pass


class NotNormal(NcmfError, ValueError):
    pass


class NotRegularInWindow(NcmfError, ValueError):
    pass


class BadAlpha(NcmfError, ValueError):
    pass


# grmod
class ShiftMismatch(NcmfError, ValueError):
    pass


class NoSolution(NcmfError, ValueError):
    pass


class WindowTooSmall(NcmfError, ValueError):
    pass


class NotMinimal(NcmfError, ValueError):
    pass


# nmf
class ProductNotF(NcmfError, ValueError):
    pass


class NotInjectiveInWindow(NcmfError, ValueError):
    pass


class NotScalarMultiple(NcmfError, ValueError):
    pass


class MixedContexts(NcmfError, ValueError):
    pass


class SquareDoesNotCommute(NcmfError, ValueError):
    pass


class NotSquare(NcmfError, ValueError):
    pass


class FNotInImage(NcmfError, ValueError):
    pass


class NotInvertible(NcmfError, ValueError):
    pass


# twist
class NotEigenvector(NcmfError, ValueError):
    pass


class NoRootInField(NcmfError, ValueError):
    pass


class NotFixed(NcmfError, ValueError):
    pass


class VerificationFailed(NcmfError, ValueError):
    pass


# copoint
class NotCopointHere(NcmfError, ValueError):
    pass


class PointOnXn(NcmfError, ValueError):
    pass


# parsing
class PolySyntaxError(NcmfError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownGenerator(NcmfError, ValueError):
    pass


class SchemaError(NcmfError, ValueError):
    """A JSON input does not match the expected shape."""
