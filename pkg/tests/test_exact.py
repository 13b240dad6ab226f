from fractions import Fraction

import numpy as np
import pytest

from heptasweep.errors import ContractViolationError, SingularMatrixError
from heptasweep.exact import (
    ExactMatrix,
    exact_determinant,
    exact_matvec,
    exact_solve,
    leading_minors,
)


def test_solve_identity():
    a = ExactMatrix.from_rows(np.eye(3))
    assert exact_solve(a, [1, 2, 3]) == [1, 2, 3]


def test_solve_permutation():
    a = ExactMatrix.from_rows([[0, 1], [1, 0]])
    assert exact_solve(a, [5, 7]) == [7, 5]


def test_solve_random_integer_system_verifies_by_multiplication():
    rng = np.random.default_rng(42)
    rows = rng.integers(-9, 10, size=(6, 6))
    a = ExactMatrix.from_rows(rows)
    y = [Fraction(int(v)) for v in rng.integers(-9, 10, size=6)]
    x = exact_solve(a, y)
    assert exact_matvec(a, x) == y  # exact equality, no tolerance


def test_solve_reports_singular_column():
    a = ExactMatrix.from_rows([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        exact_solve(a, [1, 1])


def test_determinant_identity():
    assert exact_determinant(ExactMatrix.from_rows(np.eye(4))) == 1


def test_determinant_swap_sign():
    assert exact_determinant(ExactMatrix.from_rows([[0, 1], [1, 0]])) == -1


def test_determinant_diagonal_product():
    a = ExactMatrix.from_rows(np.diag(np.arange(1.0, 8.0)))
    assert exact_determinant(a) == 5040


def test_determinant_of_fractional_entries_is_exact():
    a = ExactMatrix.from_rows([[0.5, 0.25], [0.125, 0.5]])
    assert exact_determinant(a) == Fraction(1, 4) - Fraction(1, 32)


def test_leading_minors_identity():
    assert leading_minors(ExactMatrix.from_rows(np.eye(4))) == [1, 1, 1, 1]


def test_leading_minors_partial_products():
    a = ExactMatrix.from_rows(np.diag([2.0, 3.0, 4.0]))
    assert leading_minors(a) == [2, 6, 24]


def test_last_minor_equals_full_determinant():
    rng = np.random.default_rng(7)
    a = ExactMatrix.from_rows(rng.uniform(-1, 1, size=(5, 5)))
    assert leading_minors(a)[-1] == exact_determinant(a)


def test_oracle_size_cap():
    with pytest.raises(ContractViolationError):
        ExactMatrix.from_rows(np.eye(129))
