"""Shared oracle helpers for the test suite."""

from fractions import Fraction

import numpy as np

import heptasweep as hs


def exact_from_hepta(m):
    return hs.ExactMatrix.from_rows(hs.to_dense(m))


def oracle_solve(m, y):
    """Exact-rational dense solve, converted to floats at the end."""
    em = exact_from_hepta(m)
    sol = hs.exact_solve(em, [Fraction(float(v)) for v in y])
    return np.array([float(v) for v in sol])


def oracle_det(m):
    return hs.exact_determinant(exact_from_hepta(m))


def rel_inf(x, ref):
    ref = np.asarray(ref, dtype=float)
    x = np.asarray(x, dtype=float)
    return float(np.max(np.abs(x - ref)) / np.max(np.abs(ref)))


def rng_vector(n, seed):
    return np.random.default_rng(seed).uniform(-1.0, 1.0, n)


def zero_row_matrix(n, seed, row):
    """Singular: one matrix row exactly zero; sweep detection is exact."""
    dense = hs.to_dense(hs.gen_random_dd(n, seed))
    dense[row, :] = 0.0
    return hs.from_dense(dense)


def duplicate_row_matrix(n, seed):
    """Singular: rows 0 and 1 equal, dyadic entries so the sweep prefix is exact."""
    dense = hs.to_dense(hs.gen_random_dd(n, seed))
    dense[0, :4] = [8.0, 4.0, 2.0, 1.0]
    dense[1, :5] = [8.0, 4.0, 2.0, 1.0, 0.0]
    return hs.from_dense(dense)


def double_zero_row_matrix(n, seed, row):
    """Two adjacent zero rows force the one-symbol scheme to break down."""
    dense = hs.to_dense(hs.gen_random_dd(n, seed))
    dense[row, :] = 0.0
    dense[row + 1, :] = 0.0
    return hs.from_dense(dense)
