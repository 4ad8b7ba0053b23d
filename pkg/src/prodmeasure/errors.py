"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so the split between precondition
failures and inconclusive convergence matters.
"""


class MeasureError(Exception):
    """Base class for all library errors."""


class PreconditionError(MeasureError, ValueError):
    """An operation was called on inputs that violate its contract."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DomainMismatchError(PreconditionError):
    """A set does not live in the factor it was paired with."""


class UnsupportedOperationError(PreconditionError):
    """The operation is not defined for this factor kind or tail type."""


class IncompatibleTailsError(UnsupportedOperationError):
    """Two rectangle tails cannot be combined without extra certificates."""


class OverlapError(PreconditionError):
    """Members of a union that must be disjoint intersect."""


class NotACoverError(PreconditionError):
    """A cover prefix leaves part of its target uncovered."""


class InconclusiveConvergenceError(MeasureError):
    """An infinite product could not be certified (missing or failing certificate)."""


class ProblemFileError(MeasureError):
    """A problem file failed to parse or validate."""
