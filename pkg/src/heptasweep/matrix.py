"""Heptadiagonal matrix storage, validation, dense expansion and products.

The seven diagonals of an N x N matrix are stored at their natural
(trimmed) lengths:

    d                    main diagonal, length N
    a_up, b_up, c_up     first/second/third superdiagonal, lengths N-1, N-2, N-3
    a_lo, b_lo, c_lo     first/second/third subdiagonal, lengths N-1, N-2, N-3

Entry k of ``a_lo`` is the subdiagonal element of row k+1 (rows k+2, k+3
for ``b_lo``/``c_lo``), so row i reads its subdiagonal values as
``a_lo[i-1]``, ``b_lo[i-2]``, ``c_lo[i-3]``.

Instances are immutable after construction (the backing arrays are marked
read-only) and may be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BandwidthViolationError, DimensionMismatchError, NonFiniteEntryError

#: Smallest size this storage supports; below it the first and last three
#: rows of the sweep overlap and the dense path is used instead.
MIN_N = 7

#: (field name, distance from the main diagonal)
_DIAGS = (
    ("d", 0),
    ("a_up", 1),
    ("b_up", 2),
    ("c_up", 3),
    ("a_lo", 1),
    ("b_lo", 2),
    ("c_lo", 3),
)

#: Vectors are plain 1-D float64 arrays; ``as_vector`` validates them.
Vector = np.ndarray


def as_vector(entries, n: int | None = None) -> np.ndarray:
    """Copy ``entries`` into a finite float64 vector, checking length against ``n``."""
    v = np.array(entries, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatchError(f"vector must be one-dimensional, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionMismatchError(
            f"vector length {v.shape[0]} does not match system size {n}"
        )
    if not np.isfinite(v).all():
        idx = int(np.flatnonzero(~np.isfinite(v))[0])
        raise NonFiniteEntryError(f"vector has a non-finite entry at index {idx}")
    return v


@dataclass(frozen=True)
class HeptaMatrix:
    """Seven-diagonal square matrix of size ``n`` (``n >= 7``)."""

    n: int
    d: np.ndarray
    a_up: np.ndarray
    b_up: np.ndarray
    c_up: np.ndarray
    a_lo: np.ndarray
    b_lo: np.ndarray
    c_lo: np.ndarray

    def __post_init__(self):
        for name, _ in _DIAGS:
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        validate(self)

    @classmethod
    def identity(cls, n: int) -> "HeptaMatrix":
        return cls(
            n=n,
            d=np.ones(n),
            a_up=np.zeros(n - 1),
            b_up=np.zeros(n - 2),
            c_up=np.zeros(n - 3),
            a_lo=np.zeros(n - 1),
            b_lo=np.zeros(n - 2),
            c_lo=np.zeros(n - 3),
        )


def validate(m: HeptaMatrix) -> None:
    """Raise unless every storage invariant holds (lengths, finiteness, size)."""
    if m.n < MIN_N:
        raise DimensionMismatchError(f"system size must be at least {MIN_N}, got {m.n}")
    for name, off in _DIAGS:
        arr = getattr(m, name)
        want = m.n - off
        if arr.ndim != 1 or arr.shape[0] != want:
            raise DimensionMismatchError(
                f"diagonal '{name}' must have length {want} for n={m.n}, "
                f"got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            idx = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise NonFiniteEntryError(
                f"diagonal '{name}' has a non-finite entry at index {idx}"
            )


def to_dense(m: HeptaMatrix) -> np.ndarray:
    """Expand to a dense n x n array."""
    out = np.diag(m.d)
    out += np.diag(m.a_up, 1) + np.diag(m.b_up, 2) + np.diag(m.c_up, 3)
    out += np.diag(m.a_lo, -1) + np.diag(m.b_lo, -2) + np.diag(m.c_lo, -3)
    return out


def from_dense(dense) -> HeptaMatrix:
    """Extract the seven diagonals from a dense square array.

    Every entry farther than three positions from the main diagonal must be
    exactly zero; the first offending coordinate (row-major) is reported.
    """
    a = np.array(dense, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"dense matrix must be square, got shape {a.shape}")
    rows, cols = np.nonzero(a)
    outside = np.abs(rows - cols) > 3
    if outside.any():
        k = int(np.flatnonzero(outside)[0])
        raise BandwidthViolationError(int(rows[k]), int(cols[k]))
    return HeptaMatrix(
        n=a.shape[0],
        d=np.diagonal(a).copy(),
        a_up=np.diagonal(a, 1).copy(),
        b_up=np.diagonal(a, 2).copy(),
        c_up=np.diagonal(a, 3).copy(),
        a_lo=np.diagonal(a, -1).copy(),
        b_lo=np.diagonal(a, -2).copy(),
        c_lo=np.diagonal(a, -3).copy(),
    )


def matvec(m: HeptaMatrix, v) -> np.ndarray:
    """Product A @ v using only the stored diagonals; O(N)."""
    v = as_vector(v, m.n)
    out = m.d * v
    out[:-1] += m.a_up * v[1:]
    out[:-2] += m.b_up * v[2:]
    out[:-3] += m.c_up * v[3:]
    out[1:] += m.a_lo * v[:-1]
    out[2:] += m.b_lo * v[:-2]
    out[3:] += m.c_lo * v[:-3]
    return out
