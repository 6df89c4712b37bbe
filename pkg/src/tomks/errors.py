"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class TomksError(Exception):
    """Base class for all package errors."""


class NotTotallyOrdered(TomksError):
    """Column pair violating the component-wise chain order.

    Carries the first offending triple (i, j, row), 1-based: column i < j
    but A[row][i] < A[row][j].
    """

    def __init__(self, i: int, j: int, row: int):
        self.i, self.j, self.row = i, j, row
        super().__init__(
            f"columns {i} and {j} are not chain-ordered: "
            f"row {row} has A[{row}][{i}] < A[{row}][{j}]"
        )


class NegativeEntry(TomksError):
    pass


class NotACover(TomksError):
    pass


class NotAMultiCover(TomksError):
    """Carries a witness subset incomparable with every discrepancy set."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class CapExceeded(TomksError):
    pass


class SkeletonMismatch(TomksError):
    pass


class InvalidSkeleton(TomksError):
    pass


class PreconditionViolated(TomksError):
    pass


class ReconstructionFailed(TomksError):
    """Separation model optimum < 1 but the solution failed verification.

    This is always a bug, never a condition to ignore.
    """


class ConstructionFailed(TomksError):
    pass


class NotValid(TomksError):
    pass
