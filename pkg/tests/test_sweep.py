import math
from fractions import Fraction

import numpy as np
import pytest

import heptasweep as hs
from heptasweep.errors import (
    ContractViolationError,
    SingularMatrixError,
    SymbolicBreakdownError,
)
from heptasweep.symbolic import P_ONE, P_X, RationalFn, Scalar

from helpers import (
    double_zero_row_matrix,
    duplicate_row_matrix,
    oracle_det,
    oracle_solve,
    rel_inf,
    rng_vector,
    zero_row_matrix,
)


def upper_bidiagonal(n):
    return hs.HeptaMatrix(
        n=n,
        d=np.ones(n),
        a_up=-np.ones(n - 1),
        b_up=np.zeros(n - 2),
        c_up=np.zeros(n - 3),
        a_lo=np.zeros(n - 1),
        b_lo=np.zeros(n - 2),
        c_lo=np.zeros(n - 3),
    )


def d0_zero_matrix():
    """d0 = 0 but nonsingular: leading 2x2 block [[0,1],[1,1]]."""
    dense = hs.to_dense(hs.HeptaMatrix.identity(7))
    dense[0, 0] = 0.0
    dense[0, 1] = 1.0
    dense[1, 0] = 1.0
    return hs.from_dense(dense)


# -- forward_sweep -------------------------------------------------------


def test_sweep_identity():
    m = hs.HeptaMatrix.identity(7)
    y = np.arange(1.0, 8.0)
    st = hs.forward_sweep(m, y)
    assert st.mu == [1.0] * 7
    assert st.alpha == [0.0] * 6 and st.beta == [0.0] * 5 and st.gamma == [0.0] * 4
    assert st.delta == [0.0] * 7 and st.xi == [0.0] * 7
    assert st.z == list(y)
    assert not st.flag and st.symb_index is None
    assert st.eps_checks == 7


def test_sweep_zero_leading_pivot_latches_symbol():
    st = hs.forward_sweep(d0_zero_matrix(), np.ones(7))
    assert st.flag and st.symb_index == 0
    assert isinstance(st.mu[0], Scalar)
    assert st.mu[0].value == RationalFn(P_X, P_ONE)  # the bare symbol
    assert isinstance(st.mu[1], Scalar) and st.mu[1].is_symbolic
    # mu1 = 1 - 1/s = (s - 1)/s
    assert st.mu[1].value == RationalFn(hs.Poly((-1, 1)), P_X)
    assert st.eps_checks == 1  # no comparison after the latch


def test_sweep_pivot_product_matches_oracle_determinant():
    m = hs.gen_random_dd(10, seed=21)
    st = hs.forward_sweep(m, np.zeros(10))
    det = math.prod(st.mu)
    want = float(oracle_det(m))
    assert abs(det - want) <= 1e-10 * abs(want)


def test_sweep_state_invariants_on_numeric_path():
    m = hs.gen_random_dd(9, seed=2)
    st = hs.forward_sweep(m, rng_vector(9, 3), eps=1e-10)
    assert len(st.alpha) == 8 and len(st.beta) == 7 and len(st.gamma) == 6
    assert len(st.delta) == len(st.xi) == len(st.mu) == len(st.z) == 9
    assert st.delta[0] == 0.0 and st.xi[0] == st.xi[1] == st.xi[2] == 0.0
    assert all(isinstance(v, float) and abs(v) >= st.eps for v in st.mu)
    assert st.eps_checks == 9


def test_sweep_rejects_nonpositive_eps():
    with pytest.raises(ContractViolationError):
        hs.forward_sweep(hs.HeptaMatrix.identity(7), np.ones(7), eps=0.0)


# -- back_substitute -----------------------------------------------------


def test_back_substitute_identity():
    m = hs.HeptaMatrix.identity(7)
    y = np.arange(1.0, 8.0)
    xs = hs.back_substitute(hs.forward_sweep(m, y))
    assert xs == list(y)


def test_back_substitute_telescopes_on_upper_bidiagonal():
    n = 7
    y = np.zeros(n)
    y[-1] = 1.0
    xs = hs.back_substitute(hs.forward_sweep(upper_bidiagonal(n), y))
    assert xs == [1.0] * n


def test_back_substitute_matches_oracle():
    m = hs.gen_random_dd(10, seed=5)
    y = rng_vector(10, 6)
    xs = hs.back_substitute(hs.forward_sweep(m, y))
    assert rel_inf(xs, oracle_solve(m, y)) <= 1e-10


# -- finalize ------------------------------------------------------------


def test_finalize_passes_numeric_components_through():
    out = hs.finalize([1.0, -2.5, 3.0])
    assert np.array_equal(out, [1.0, -2.5, 3.0])


def test_finalize_evaluates_symbolic_component():
    comp = Scalar.rational(RationalFn(hs.Poly((6, 2)), hs.Poly((3, 1))))
    assert np.array_equal(hs.finalize([comp]), [2.0])


def test_finalize_on_planted_matrix_matches_oracle():
    m, _ = hs.gen_planted_zero_minors(9, seed=13, zero_at=[1])
    y = rng_vector(9, 14)
    x = hs.finalize(hs.back_substitute(hs.forward_sweep(m, y)))
    assert rel_inf(x, oracle_solve(m, y)) <= 1e-8


# -- determinant ---------------------------------------------------------


def test_determinant_identity():
    assert hs.determinant(hs.HeptaMatrix.identity(7)) == 1.0


def test_determinant_diagonal_product():
    m = hs.from_dense(np.diag(np.arange(1.0, 8.0)))
    assert hs.determinant(m) == 5040.0


def test_determinant_matches_oracle():
    m = hs.gen_random_dd(12, seed=9)
    want = float(oracle_det(m))
    assert abs(hs.determinant(m) - want) <= 1e-9 * abs(want)


def test_determinant_through_symbolic_path():
    m, minors = hs.gen_planted_zero_minors(10, seed=5, zero_at=[2])
    want = float(minors[-1])
    assert abs(hs.determinant(m) - want) <= 1e-9 * abs(want)


# -- solve ---------------------------------------------------------------


def test_solve_identity():
    y = np.arange(1.0, 8.0)
    rep = hs.solve(hs.HeptaMatrix.identity(7), y)
    assert np.array_equal(rep.x, y)
    assert rep.det == 1.0
    assert not rep.used_symbolic and rep.symb_index is None
    assert rep.residual_inf == 0.0
    assert rep.eps_used == hs.DEFAULT_EPS


def test_solve_d0_zero_uses_symbol_and_matches_oracle():
    m = d0_zero_matrix()
    y = rng_vector(7, 77)
    rep = hs.solve(m, y)
    assert rep.used_symbolic and rep.symb_index == 0
    assert rel_inf(rep.x, oracle_solve(m, y)) <= 1e-8


def test_solve_constructed_rhs_recovers_ones():
    m = hs.gen_random_dd(10, seed=31)
    rep = hs.solve(m, hs.matvec(m, np.ones(10)))
    assert np.max(np.abs(rep.x - 1.0)) <= 1e-9


def test_solve_zero_rhs_gives_exact_zero():
    m = hs.gen_random_dd(8, seed=12)
    rep = hs.solve(m, np.zeros(8))
    assert np.array_equal(rep.x, np.zeros(8))
    m2, _ = hs.gen_planted_zero_minors(8, seed=3, zero_at=[2])
    rep2 = hs.solve(m2, np.zeros(8))
    assert np.array_equal(rep2.x, np.zeros(8))


def test_solve_is_linear_in_the_rhs():
    m = hs.gen_random_dd(10, seed=8)
    y1, y2 = rng_vector(10, 71), rng_vector(10, 72)
    a, b = 2.25, -0.75
    combo = hs.solve(m, a * y1 + b * y2).x
    parts = a * hs.solve(m, y1).x + b * hs.solve(m, y2).x
    assert rel_inf(combo, parts) <= 1e-8


def test_solve_small_system_routes_to_dense_oracle():
    dense = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]])
    y = np.array([1.0, 2.0, 3.0])
    rep = hs.solve(dense, y)
    assert not rep.used_symbolic
    assert np.max(np.abs(dense @ rep.x - y)) <= 1e-12
    assert abs(rep.det - np.linalg.det(dense)) <= 1e-9 * abs(rep.det)


def test_solve_dense_input_of_banded_size_uses_the_sweep():
    m = hs.gen_random_dd(8, seed=40)
    y = rng_vector(8, 41)
    rep = hs.solve(hs.to_dense(m), y)
    assert rel_inf(rep.x, oracle_solve(m, y)) <= 1e-8


def test_solve_singular_zero_row_is_detected():
    with pytest.raises(SingularMatrixError):
        hs.solve(zero_row_matrix(8, seed=3, row=4), np.ones(8))


def test_solve_singular_duplicate_rows_is_detected():
    with pytest.raises(SingularMatrixError):
        hs.solve(duplicate_row_matrix(8, seed=11), np.arange(1.0, 9.0))


def test_solve_breakdown_on_adjacent_zero_rows():
    with pytest.raises(SymbolicBreakdownError):
        hs.solve(double_zero_row_matrix(9, seed=4, row=3), np.ones(9))


# -- pivot/minor bridge (telescoping) -------------------------------------


def test_partial_pivot_products_equal_leading_minors():
    m = hs.gen_random_dd(12, seed=17)
    st = hs.forward_sweep(m, np.zeros(12))
    minors = hs.leading_minors(hs.ExactMatrix.from_rows(hs.to_dense(m)))
    prod = 1.0
    for i, mu in enumerate(st.mu):
        prod *= mu
        want = float(minors[i])
        assert abs(prod - want) <= 1e-9 * abs(want)


def test_pivots_are_minor_ratios():
    m = hs.gen_random_dd(10, seed=18)
    st = hs.forward_sweep(m, np.zeros(10))
    minors = hs.leading_minors(hs.ExactMatrix.from_rows(hs.to_dense(m)))
    prev = Fraction(1)
    for i, mu in enumerate(st.mu):
        want = float(minors[i] / prev)
        assert abs(mu - want) <= 1e-9 * abs(want)
        prev = minors[i]


def test_flag_latches_once_and_stops_eps_checks():
    m, _ = hs.gen_planted_zero_minors(12, seed=8, zero_at=[1, 4])
    st = hs.forward_sweep(m, np.ones(12))
    assert st.flag and st.symb_index == 1
    assert st.eps_checks == st.symb_index + 1
    atomic = [
        v
        for v in st.mu
        if isinstance(v, Scalar) and v.is_symbolic and v.value == RationalFn(P_X, P_ONE)
    ]
    assert len(atomic) == 1
