"""Dense exact-rational linear algebra: the verification oracle.

Deliberately brute force: fraction-free (Bareiss) elimination over big
integers with row exchange, exact back substitution, and per-submatrix
determinants for the leading principal minors.  This is the independent
reference the sweep is tested against, and the dense fallback for systems
too small to carry seven diagonals.  Size is capped; performance is a
non-goal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractViolationError, DimensionMismatchError, SingularMatrixError

#: Exact elimination cost grows quickly; desk-scale verification needs no more.
MAX_ORACLE_N = 128


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(float(v))


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of Fractions (always in reduced canonical form)."""

    n: int
    rows: tuple

    @classmethod
    def from_rows(cls, rows) -> "ExactMatrix":
        grid = tuple(tuple(_to_fraction(v) for v in row) for row in rows)
        n = len(grid)
        if n == 0:
            raise DimensionMismatchError("empty matrix")
        if n > MAX_ORACLE_N:
            raise ContractViolationError(f"oracle is capped at n={MAX_ORACLE_N}, got {n}")
        if any(len(r) != n for r in grid):
            raise DimensionMismatchError("matrix must be square")
        return cls(n=n, rows=grid)


def _cleared_rows(rows, extra=None):
    """Scale each row by its denominator lcm; returns (int rows, scaling).

    ``extra`` is an optional right-hand side appended as a final column.
    The determinant of the scaled matrix is ``scaling`` times the original.
    """
    out = []
    scaling = 1
    for i, row in enumerate(rows):
        values = list(row) + ([extra[i]] if extra is not None else [])
        mult = 1
        for v in values:
            q = v.denominator
            if q != 1:
                mult = mult * q // _gcd(mult, q)
        scaling *= mult
        out.append([int(v * mult) for v in values])
    return out, scaling


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _bareiss_forward(rows, ncols):
    """Fraction-free elimination in place; returns the permutation sign.

    Rows may be longer than the square part (augmented systems); pivoting
    searches the square part only.  Raises SingularMatrixError when a
    column has no nonzero pivot.
    """
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                raise SingularMatrixError(f"no nonzero pivot in column {k}")
        pivot = rows[k][k]
        row_k = rows[k]
        for r in range(k + 1, n):
            row_r = rows[r]
            factor = row_r[k]
            for c in range(k + 1, ncols):
                num = pivot * row_r[c] - factor * row_k[c]
                quot, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("fraction-free elimination lost exactness")
                row_r[c] = quot
            row_r[k] = 0
        prev = pivot
    return sign


def exact_determinant(a: ExactMatrix) -> Fraction:
    """Exact determinant via fraction-free elimination with sign tracking."""
    rows, scaling = _cleared_rows(a.rows)
    sign = 1
    prev = 1
    n = a.n
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = rows[k][k]
        row_k = rows[k]
        for r in range(k + 1, n):
            row_r = rows[r]
            factor = row_r[k]
            for c in range(k + 1, n):
                num = pivot * row_r[c] - factor * row_k[c]
                quot, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("fraction-free elimination lost exactness")
                row_r[c] = quot
            row_r[k] = 0
        prev = pivot
    return Fraction(sign * rows[n - 1][n - 1], scaling)


def exact_solve(a: ExactMatrix, y) -> list:
    """Exact solution of A x = y; the result satisfies the system exactly."""
    rhs = [_to_fraction(v) for v in y]
    if len(rhs) != a.n:
        raise DimensionMismatchError(
            f"right-hand side length {len(rhs)} does not match n={a.n}"
        )
    rows, _ = _cleared_rows(a.rows, extra=rhs)
    n = a.n
    _bareiss_forward(rows, n + 1)
    if rows[n - 1][n - 1] == 0:
        raise SingularMatrixError(f"no nonzero pivot in column {n - 1}")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][n])
        for j in range(i + 1, n):
            acc -= rows[i][j] * x[j]
        x[i] = acc / rows[i][i]
    return x


def exact_matvec(a: ExactMatrix, v) -> list:
    """Exact product A @ v."""
    vs = [_to_fraction(t) for t in v]
    if len(vs) != a.n:
        raise DimensionMismatchError(f"vector length {len(vs)} does not match n={a.n}")
    return [sum((row[j] * vs[j] for j in range(a.n)), Fraction(0)) for row in a.rows]


def leading_minors(a: ExactMatrix) -> list:
    """M_0 .. M_{n-1}: determinant of each leading principal submatrix."""
    out = []
    for k in range(1, a.n + 1):
        sub = ExactMatrix.from_rows(tuple(row[:k] for row in a.rows[:k]))
        out.append(exact_determinant(sub))
    return out
