import numpy as np
import pytest

import heptasweep as hs
from heptasweep.errors import (
    BandwidthViolationError,
    DimensionMismatchError,
    NonFiniteEntryError,
)

from helpers import rng_vector


def test_identity_is_valid():
    m = hs.HeptaMatrix.identity(7)
    hs.validate(m)  # must not raise
    assert m.n == 7


def test_superdiagonal_length_must_be_n_minus_1():
    with pytest.raises(DimensionMismatchError, match="a_up"):
        hs.HeptaMatrix(
            n=7,
            d=np.ones(7),
            a_up=np.zeros(7),
            b_up=np.zeros(5),
            c_up=np.zeros(4),
            a_lo=np.zeros(6),
            b_lo=np.zeros(5),
            c_lo=np.zeros(4),
        )


def test_minimum_size_is_seven():
    with pytest.raises(DimensionMismatchError, match="at least 7"):
        hs.HeptaMatrix.identity(6)


def test_non_finite_entry_reports_diagonal_and_index():
    d = np.ones(7)
    d[3] = np.nan
    with pytest.raises(NonFiniteEntryError, match="'d'.*index 3"):
        hs.HeptaMatrix(
            n=7,
            d=d,
            a_up=np.zeros(6),
            b_up=np.zeros(5),
            c_up=np.zeros(4),
            a_lo=np.zeros(6),
            b_lo=np.zeros(5),
            c_lo=np.zeros(4),
        )


def test_arrays_are_read_only():
    m = hs.HeptaMatrix.identity(7)
    with pytest.raises(ValueError):
        m.d[0] = 2.0


def test_to_dense_identity():
    assert np.array_equal(hs.to_dense(hs.HeptaMatrix.identity(7)), np.eye(7))


def test_to_dense_places_third_superdiagonal():
    m = hs.HeptaMatrix(
        n=7,
        d=np.zeros(7),
        a_up=np.zeros(6),
        b_up=np.zeros(5),
        c_up=np.array([5.0, 0.0, 0.0, 0.0]),
        a_lo=np.zeros(6),
        b_lo=np.zeros(5),
        c_lo=np.zeros(4),
    )
    dense = hs.to_dense(m)
    expected = np.zeros((7, 7))
    expected[0, 3] = 5.0
    assert np.array_equal(dense, expected)


def test_from_dense_identity():
    m = hs.from_dense(np.eye(7))
    assert np.array_equal(m.d, np.ones(7))
    assert not m.a_up.any() and not m.c_lo.any()


def test_from_dense_rejects_out_of_band_entry():
    dense = np.eye(7)
    dense[0, 4] = 1.0
    with pytest.raises(BandwidthViolationError) as err:
        hs.from_dense(dense)
    assert err.value.position == (0, 4)


@pytest.mark.parametrize("n,seed", [(10, 1), (12, 2)])
def test_dense_round_trip(n, seed):
    m = hs.gen_random_dd(n, seed)
    back = hs.from_dense(hs.to_dense(m))
    for name in ("d", "a_up", "b_up", "c_up", "a_lo", "b_lo", "c_lo"):
        assert np.array_equal(getattr(m, name), getattr(back, name))


def test_matvec_identity():
    m = hs.HeptaMatrix.identity(7)
    v = np.arange(1.0, 8.0)
    assert np.array_equal(hs.matvec(m, v), v)


def test_matvec_scaled_diagonal():
    m = hs.HeptaMatrix(
        n=7,
        d=2.0 * np.ones(7),
        a_up=np.zeros(6),
        b_up=np.zeros(5),
        c_up=np.zeros(4),
        a_lo=np.zeros(6),
        b_lo=np.zeros(5),
        c_lo=np.zeros(4),
    )
    assert np.array_equal(hs.matvec(m, np.ones(7)), 2.0 * np.ones(7))


def test_matvec_matches_dense_product():
    # oracle: the dense product
    m = hs.gen_random_dd(10, seed=3)
    v = rng_vector(10, seed=4)
    want = hs.to_dense(m) @ v
    got = hs.matvec(m, v)
    assert np.all(np.abs(got - want) <= 1e-13 * np.maximum(np.abs(want), 1.0))


def test_matvec_rejects_length_mismatch():
    with pytest.raises(DimensionMismatchError):
        hs.matvec(hs.HeptaMatrix.identity(7), np.ones(8))


def test_as_vector_rejects_non_finite():
    with pytest.raises(NonFiniteEntryError):
        hs.as_vector([1.0, np.inf, 3.0])
