"""Exception types shared across the package."""


class HeptaError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(HeptaError, ValueError):
    """A diagonal or vector has the wrong length for the system size."""


class NonFiniteEntryError(HeptaError, ValueError):
    """An entry is NaN or infinite where a finite value is required."""


class BandwidthViolationError(HeptaError, ValueError):
    """A nonzero entry lies outside the seven-diagonal band.

    ``position`` holds the offending coordinate in whatever indexing the
    caller used (0-based for dense arrays, 1-based for Matrix Market files).
    """

    def __init__(self, i, j, message=None):
        self.position = (i, j)
        super().__init__(message or f"nonzero entry outside the band at ({i}, {j})")


class ScalarDivisionError(HeptaError, ZeroDivisionError):
    """Division by an exactly-zero scalar; ``op`` tags the failing operation."""

    def __init__(self, op, detail=""):
        self.op = op
        msg = f"division by exact zero in '{op}'"
        super().__init__(msg + (f": {detail}" if detail else ""))


class PoleAtZeroError(HeptaError, ZeroDivisionError):
    """Cancellation left the symbol in a denominator at the substitution point."""


class ContractViolationError(HeptaError, TypeError):
    """An operation was called outside its stated precondition."""


class DegreeLimitError(HeptaError, RuntimeError):
    """A rational function exceeded the configured degree bound.

    Degrees grow by a bounded amount per sweep row, so tripping this guard
    indicates an implementation bug rather than a bad input.
    """


class SingularMatrixError(HeptaError, ArithmeticError):
    """The coefficient matrix is singular; no unique solution exists."""


class SymbolicBreakdownError(HeptaError, ArithmeticError):
    """A pivot vanished identically after the symbolic fallback was in use.

    The single-symbol scheme cannot recover from a second exact zero; see
    the solver documentation.
    """


class RetriesExhaustedError(HeptaError, RuntimeError):
    """A generator gave up after its bounded number of reseeds."""


class FileFormatError(HeptaError, ValueError):
    """A matrix file could not be parsed; ``line`` is set when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
