"""Exception types shared across the package.

Every exception derives from QclError so callers can catch the package's
failures with a single except clause; most also derive from ValueError
because they signal bad input values.
"""


class QclError(Exception):
    """Base class for all errors raised by this package."""


class NonSquareError(QclError, ValueError):
    """A matrix that must be square is not."""


class NotHermitianError(QclError, ValueError):
    """A matrix that must be Hermitian deviates beyond tolerance."""


class DimensionMismatchError(QclError, ValueError):
    """Operand dimensions are inconsistent with each other."""


class NegativeEigenvalueError(QclError, ValueError):
    """An eigenvalue is negative beyond the allowed numerical slack."""


class NotUnitaryError(QclError, ValueError):
    """A matrix that must be unitary deviates beyond tolerance."""


class DomainError(QclError, ValueError):
    """A scalar parameter lies outside its allowed domain."""


class OptimizerDivergedError(QclError, RuntimeError):
    """A numerical optimizer returned a non-finite or invalid result."""


class CheckFailedError(QclError, AssertionError):
    """A structural self-check did not hold to tolerance."""


class ClosedFormMismatchError(QclError, AssertionError):
    """Two independent computation routes disagree beyond tolerance."""


class NotADistributionError(QclError, ValueError):
    """A probability table has negative entries or does not sum to one."""


class MaxIterationsError(QclError, RuntimeError):
    """An iterative method hit its iteration cap before converging."""


class NumericalBreakdownError(QclError, RuntimeError):
    """An iterative method produced values too ill-conditioned to continue."""


class NoSignChangeError(QclError, ValueError):
    """A bracketing root finder was given endpoints with equal signs."""
