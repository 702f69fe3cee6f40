"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CodingError(ValueError):
    """Base class for all errors raised by :mod:`mpqlrc`."""


# fields
class NotOddPrime(CodingError):
    pass


class NoModulusKnown(CodingError):
    pass


class ReducibleModulus(CodingError):
    pass


class NonSquareOrder(CodingError):
    pass


class NotADivisor(CodingError):
    pass


# matrices
class ShapeMismatch(CodingError):
    pass


class Singular(CodingError):
    pass


class NotFullRank(CodingError):
    pass


class ZeroMatrix(CodingError):
    pass


# codes
class EmptySet(CodingError):
    pass


class OutOfRange(CodingError):
    pass


class TooLong(CodingError):
    pass


class RepeatedPoint(CodingError):
    pass


class ZeroMultiplier(CodingError):
    pass


class FieldExhausted(CodingError):
    pass


class ConstructionFailed(CodingError):
    pass


# matrix-product codes
class TooWide(CodingError):
    pass


class PreconditionFailed(CodingError):
    def __init__(self, condition: str):
        super().__init__(f"precondition failed: {condition}")
        self.condition = condition


class RowCountOutOfRange(CodingError):
    pass


class NotNsc(CodingError):
    pass


class NotNested(CodingError):
    pass


class NotEnlargement(CodingError):
    pass


# locality
class Degenerate(CodingError):
    pass


class CoordinateNotInSet(CodingError):
    pass


class NotSubcode(CodingError):
    pass


class UnverifiedMatrixStructure(CodingError):
    pass


class NonPositive(CodingError):
    pass


# quantum parameters
class NotDualContaining(CodingError):
    pass


class DeltaConditionUnverified(CodingError):
    pass


class NegativeQuantumDimension(CodingError):
    pass


class InconsistentDimensions(CodingError):
    pass


class UnsupportedField(CodingError):
    pass


class HypothesisFailed(CodingError):
    """A family was requested with parameters outside its hypotheses."""

    def __init__(self, name: str, detail: str = ""):
        msg = f"hypothesis failed: {name}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.name = name


class ClaimMismatch(CodingError):
    """A constructed code disagrees with the parameters it was built to have."""


class LocalityUnverified(CodingError):
    """A recovery structure was offered as evidence before it passed verification."""


class InvalidRequest(CodingError):
    """A family request names an unknown family or misses a parameter."""
