"""Deterministic test-matrix families.

Four families cover the solver's code paths:

* ``random_dd`` -- off-diagonals uniform in [-1, 1], main diagonal set to a
  dominance factor times the row's off-diagonal absolute sum.  Strictly
  diagonally dominant, so every leading principal minor is nonzero and the
  sweep never needs the symbolic fallback.
* ``fd6_laplacian`` -- the one-dimensional sixth-order central-difference
  second-derivative operator on a uniform grid.  The physical applications
  that motivate seven-diagonal systems put their bands at mesh-dependent
  offsets; this operator is the natural contiguous-band stand-in.  Its
  stencil weights are not hardcoded: they are derived by solving the 7x7
  Vandermonde moment system exactly.
* ``toeplitz`` -- constant diagonals from a caller-supplied 7-entry row.
* ``planted_zero_minors`` -- starts from ``random_dd`` and shifts selected
  diagonal entries so the chosen leading principal minors vanish (to float
  precision; index 0 is exact) while the full matrix stays certified
  nonsingular.  These matrices defeat pivot-free elimination and force the
  symbolic fallback at the first planted index.

All randomness comes from numpy's PCG64 generator seeded explicitly, and
the draw order is fixed, so a given parameter set reproduces bit-identical
matrices.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractViolationError, DimensionMismatchError, RetriesExhaustedError
from .exact import ExactMatrix, exact_determinant, exact_solve, leading_minors
from .matrix import MIN_N, HeptaMatrix, from_dense, to_dense

FAMILIES = ("random_dd", "fd6_laplacian", "toeplitz", "planted_zero_minors")

#: Planted minors are accepted when |M_i| < |M_{i-1}| / 10**12.
_PLANT_REL = Fraction(1, 10**12)


def gen_random_dd(n: int, seed: int, dominance: float = 1.5) -> HeptaMatrix:
    """Strictly diagonally dominant random band; never triggers the fallback."""
    if n < MIN_N:
        raise DimensionMismatchError(f"n must be at least {MIN_N}, got {n}")
    if dominance < 1.05:
        raise ContractViolationError(f"dominance factor must be >= 1.05, got {dominance}")
    rng = np.random.default_rng(seed)
    a_up = rng.uniform(-1.0, 1.0, n - 1)
    b_up = rng.uniform(-1.0, 1.0, n - 2)
    c_up = rng.uniform(-1.0, 1.0, n - 3)
    a_lo = rng.uniform(-1.0, 1.0, n - 1)
    b_lo = rng.uniform(-1.0, 1.0, n - 2)
    c_lo = rng.uniform(-1.0, 1.0, n - 3)
    row = np.zeros(n)
    row[:-1] += np.abs(a_up)
    row[:-2] += np.abs(b_up)
    row[:-3] += np.abs(c_up)
    row[1:] += np.abs(a_lo)
    row[2:] += np.abs(b_lo)
    row[3:] += np.abs(c_lo)
    return HeptaMatrix(n, dominance * row, a_up, b_up, c_up, a_lo, b_lo, c_lo)


@functools.cache
def fd6_stencil() -> tuple:
    """Second-derivative weights on offsets -3..3, exact Fractions.

    Solves the Vandermonde moment system sum_j w_j * o_j**k = 2*[k == 2]
    for k = 0..6, which makes the stencil exact on monomials through
    degree 7 (odd symmetry gives degree 7 for free).
    """
    offsets = range(-3, 4)
    rows = [[Fraction(o) ** k for o in offsets] for k in range(7)]
    rhs = [Fraction(2) if k == 2 else Fraction(0) for k in range(7)]
    return tuple(exact_solve(ExactMatrix.from_rows(rows), rhs))


def gen_toeplitz(n: int, stencil) -> HeptaMatrix:
    """Constant-diagonal matrix from seven values ordered offset -3 .. +3."""
    s = [float(v) for v in stencil]
    if len(s) != 7:
        raise DimensionMismatchError(f"stencil row must have 7 entries, got {len(s)}")
    cl, bl, al, dd, au, bu, cu = s
    return HeptaMatrix(
        n=n,
        d=np.full(n, dd),
        a_up=np.full(n - 1, au),
        b_up=np.full(n - 2, bu),
        c_up=np.full(n - 3, cu),
        a_lo=np.full(n - 1, al),
        b_lo=np.full(n - 2, bl),
        c_lo=np.full(n - 3, cl),
    )


def gen_fd6_laplacian(n: int, h: float = 1.0) -> HeptaMatrix:
    """Sixth-order 7-point second-derivative operator scaled by 1/h**2.

    Boundary rows simply truncate the band; no boundary conditions are
    imposed.
    """
    if h <= 0:
        raise ContractViolationError(f"grid spacing must be positive, got {h}")
    hh = float(h) ** 2
    return gen_toeplitz(n, [float(w) / hh for w in fd6_stencil()])


def _leading_det(dense: np.ndarray, k: int) -> Fraction:
    if k == 0:
        return Fraction(1)
    return exact_determinant(ExactMatrix.from_rows(dense[:k, :k]))


def gen_planted_zero_minors(
    n: int,
    seed: int,
    zero_at,
    dominance: float = 1.5,
    max_retries: int = 10,
):
    """Nonsingular matrix whose chosen leading principal minors vanish.

    For each planted index i (ascending) the diagonal entry d_i is shifted
    by M_i / M_{i-1} in exact arithmetic and rounded to the nearest float;
    the result is checked to satisfy |M_i| < 1e-12 * |M_{i-1}| (index 0
    comes out exactly zero).  Attempts whose full determinant ends up zero
    are rejected and reseeded with seed+1, seed+2, ...

    Returns ``(matrix, minors)`` where ``minors`` is the exact-oracle
    certificate M_0 .. M_{n-1} of the returned matrix.
    """
    zero_at = _check_plant_indices(n, zero_at)
    for attempt in range(max_retries):
        base = gen_random_dd(n, seed + attempt, dominance)
        dense = to_dense(base)
        ok = True
        for i in zero_at:
            m_prev = _leading_det(dense, i)
            if m_prev == 0:
                ok = False
                break
            m_cur = _leading_det(dense, i + 1)
            dense[i, i] = float(Fraction(dense[i, i]) - m_cur / m_prev)
            if abs(_leading_det(dense, i + 1)) >= _PLANT_REL * abs(m_prev):
                ok = False
                break
        if not ok:
            continue
        minors = leading_minors(ExactMatrix.from_rows(dense))
        if minors[-1] == 0:
            continue
        return from_dense(dense), tuple(minors)
    raise RetriesExhaustedError(
        f"could not plant zero minors {list(zero_at)} within {max_retries} seeds"
    )


def _check_plant_indices(n: int, zero_at) -> tuple:
    idx = tuple(int(i) for i in zero_at)
    if not idx:
        raise ContractViolationError("zero_at must name at least one minor")
    if any(i < 0 or i >= n - 1 for i in idx):
        raise ContractViolationError(f"planted indices must lie in [0, {n - 2}]: {idx}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ContractViolationError(f"planted indices must be strictly increasing: {idx}")
    if any(b - a < 2 for a, b in zip(idx, idx[1:])):
        # the d-shift for index b divides by M_{b-1}, which the plant at a
        # has just driven to (near) zero when b == a + 1
        raise ContractViolationError(f"planted indices must be at least 2 apart: {idx}")
    return idx


@dataclass(frozen=True)
class GenSpec:
    """Serializable description of one generated matrix."""

    family: str
    n: int
    seed: int = 0
    dominance: float = 1.5
    spacing: float = 1.0
    stencil: tuple = ()
    zero_at: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ContractViolationError(
                f"unknown family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.n < MIN_N:
            raise DimensionMismatchError(f"n must be at least {MIN_N}, got {self.n}")
        object.__setattr__(self, "stencil", tuple(float(v) for v in self.stencil))
        object.__setattr__(self, "zero_at", tuple(int(i) for i in self.zero_at))
        if self.family == "toeplitz" and len(self.stencil) != 7:
            raise DimensionMismatchError("toeplitz family needs a 7-entry stencil row")
        if self.family == "planted_zero_minors":
            _check_plant_indices(self.n, self.zero_at)


@dataclass(frozen=True)
class GenResult:
    matrix: HeptaMatrix
    #: Exact leading-minor certificate; only the planted family provides one.
    minors: tuple | None = None


def generate(spec: GenSpec) -> GenResult:
    """Build the matrix a GenSpec describes; identical specs give identical bits."""
    if spec.family == "random_dd":
        return GenResult(gen_random_dd(spec.n, spec.seed, spec.dominance))
    if spec.family == "fd6_laplacian":
        return GenResult(gen_fd6_laplacian(spec.n, spec.spacing))
    if spec.family == "toeplitz":
        return GenResult(gen_toeplitz(spec.n, spec.stencil))
    m, minors = gen_planted_zero_minors(spec.n, spec.seed, spec.zero_at, spec.dominance)
    return GenResult(m, minors)
