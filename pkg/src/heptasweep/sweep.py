"""Seven-diagonal elimination: forward sweep, back substitution, solve.

The solver runs the classical O(N) banded sweep in plain floating point,
comparing each pivot against an absolute threshold ``eps``.  The first
pivot below the threshold latches the fallback: the sweep restarts in
exact arithmetic (every finite float is a dyadic rational, so promoting
the inputs is lossless), the offending pivot is replaced by a symbolic
variable, and from that point pivots are never compared against ``eps``
again -- any later pivot is a symbolic expression.  Quantities that touch
the symbol are carried as exact rational functions in canonical form;
back substitution finishes by cancelling common factors and substituting
symbol = 0.

Replaying the pre-trigger rows exactly matters: the final cancellation
relies on algebraic identities between sweep quantities, and identities
between rounded floats only hold to machine precision, which would leave
uncancelled poles with roundoff-sized residues exactly where the answer
is read off.  With an exact replay a pole that survives cancellation is a
theorem-grade certificate that the matrix is singular, and the determinant
(the pivot product at symbol = 0) is exactly zero precisely for singular
inputs.  The float lane stays allocation-free and is the only thing large
well-conditioned systems ever execute; the exact lane costs big-rational
arithmetic and is meant for the desk-scale systems that actually hit a
zero pivot.

A solve is strictly sequential (the recurrences form a dependence chain),
but distinct solves on shared immutable inputs may run concurrently.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import (
    ContractViolationError,
    NonFiniteEntryError,
    PoleAtZeroError,
    SingularMatrixError,
    SymbolicBreakdownError,
)
from .exact import ExactMatrix, exact_determinant, exact_solve
from .matrix import MIN_N, HeptaMatrix, as_vector, from_dense, matvec
from .symbolic import Scalar, degree_limit, fraction_to_float, is_exact_zero

#: Default absolute pivot threshold.  No relative or row-norm scaling is
#: applied; callers solving badly scaled systems should pass their own.
DEFAULT_EPS = 1e-10


@dataclass
class SweepState:
    """Everything the forward sweep produced.

    The coefficient lists hold plain floats except for quantities that
    depend on the fallback symbol, which are
    :class:`~heptasweep.symbolic.Scalar` values; treat the lists as
    read-only.  ``eps_checks`` counts pivot comparisons against ``eps``
    and stops growing the moment the flag latches.
    """

    n: int
    alpha: list
    beta: list
    gamma: list
    delta: list
    xi: list
    mu: list
    z: list | None
    flag: bool
    symb_index: int | None
    eps: float
    eps_checks: int


@dataclass(frozen=True)
class SolveReport:
    """Solution plus telemetry.

    ``det`` is the pivot product evaluated in floating point; for very
    large systems it may overflow to inf (or underflow to 0.0) without
    affecting the solution or the singularity decision, which is made
    exactly on the symbolic path.
    """

    x: np.ndarray
    det: float
    residual_inf: float
    used_symbolic: bool
    symb_index: int | None
    eps_used: float


class _FallbackTriggered(Exception):
    def __init__(self, row):
        self.row = row


def _sweep_rows(n, d, au, bu, cu, al, bl, cl, yv, zero, pivot):
    """One generic pass of the forward recurrences.

    Works on any scalar type with arithmetic operators (floats on the
    fast lane, Fractions and Scalars on the exact lane).  ``pivot(i, mk)``
    inspects or replaces each pivot before it is divided by; ``yv`` may be
    None to skip the right-hand-side sweep.  ``zero`` seeds the output
    lists with the lane's zero element.
    """
    alpha = [zero] * (n - 1)
    beta = [zero] * (n - 2)
    gamma = [zero] * (n - 3)
    delta = [zero] * n
    xi = [zero] * n
    mu = [zero] * n
    have_z = yv is not None
    z = [zero] * n if have_z else None

    # row 0
    mk = pivot(0, d[0])
    mu[0] = mk
    alpha[0] = au[0] / mk
    beta[0] = bu[0] / mk
    gamma[0] = cu[0] / mk
    if have_z:
        z[0] = yv[0] / mk

    # row 1
    de = al[0]
    mk = pivot(1, d[1] - alpha[0] * de)
    delta[1] = de
    mu[1] = mk
    alpha[1] = (au[1] - beta[0] * de) / mk
    beta[1] = (bu[1] - gamma[0] * de) / mk
    gamma[1] = cu[1] / mk
    if have_z:
        z[1] = (yv[1] - de * z[0]) / mk

    # row 2
    de = al[1] - alpha[0] * bl[0]
    mk = pivot(2, d[2] - alpha[1] * de - beta[0] * bl[0])
    delta[2] = de
    mu[2] = mk
    alpha[2] = (au[2] - beta[1] * de - gamma[0] * bl[0]) / mk
    beta[2] = (bu[2] - gamma[1] * de) / mk
    gamma[2] = cu[2] / mk
    if have_z:
        z[2] = (yv[2] - de * z[1] - bl[0] * z[0]) / mk

    # rows 3 .. n-1; alpha/beta/gamma truncate near the bottom edge
    for i in range(3, n):
        cs = cl[i - 3]
        a2 = alpha[i - 2]
        a3 = alpha[i - 3]
        de = al[i - 1] - a2 * bl[i - 2] - cs * (beta[i - 3] - a3 * a2)
        xv = bl[i - 2] - a3 * cs
        mk = pivot(i, d[i] - alpha[i - 1] * de - beta[i - 2] * xv - gamma[i - 3] * cs)
        delta[i] = de
        xi[i] = xv
        mu[i] = mk
        if i < n - 1:
            alpha[i] = (au[i] - beta[i - 1] * de - gamma[i - 2] * xv) / mk
        if i < n - 2:
            beta[i] = (bu[i] - gamma[i - 1] * de) / mk
        if i < n - 3:
            gamma[i] = cu[i] / mk
        if have_z:
            z[i] = (yv[i] - de * z[i - 1] - xv * z[i - 2] - cs * z[i - 3]) / mk

    return alpha, beta, gamma, delta, xi, mu, z


def forward_sweep(m: HeptaMatrix, y, eps: float = DEFAULT_EPS) -> SweepState:
    """Factorization and downward sweep; see the module docstring."""
    return _forward(m, as_vector(y, m.n), eps)


def _forward(m: HeptaMatrix, y, eps: float) -> SweepState:
    if eps <= 0:
        raise ContractViolationError(f"eps must be positive, got {eps}")
    n = m.n
    # Plain Python floats: list indexing avoids numpy scalar boxing.
    diags = tuple(
        arr.tolist()
        for arr in (m.d, m.a_up, m.b_up, m.c_up, m.a_lo, m.b_lo, m.c_lo)
    )
    yv = y.tolist() if y is not None else None

    eps_checks = 0

    def check_pivot(i, mk):
        nonlocal eps_checks
        eps_checks += 1
        if abs(mk) < eps:
            raise _FallbackTriggered(i)
        return mk

    try:
        alpha, beta, gamma, delta, xi, mu, z = _sweep_rows(
            n, *diags, yv, 0.0, check_pivot
        )
    except _FallbackTriggered as fb:
        return _forward_exact(n, diags, yv, eps, fb.row)

    return SweepState(
        n=n,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        delta=delta,
        xi=xi,
        mu=mu,
        z=z,
        flag=False,
        symb_index=None,
        eps=eps,
        eps_checks=eps_checks,
    )


def _forward_exact(n, diags, yv, eps, trigger_row) -> SweepState:
    """Exact replay with the pivot at ``trigger_row`` replaced by the symbol."""
    exact_diags = tuple([Fraction(v) for v in arr] for arr in diags)
    exact_y = [Fraction(v) for v in yv] if yv is not None else None

    def pivot(i, mk):
        if i == trigger_row:
            return Scalar.symbol()
        if i > trigger_row and is_exact_zero(mk):
            raise SymbolicBreakdownError(
                f"pivot {i} vanished identically while the symbolic fallback "
                "was already active; a single symbol cannot recover twice"
            )
        return mk

    with degree_limit(2 * n):
        alpha, beta, gamma, delta, xi, mu, z = _sweep_rows(
            n, *exact_diags, exact_y, Fraction(0), pivot
        )

    return SweepState(
        n=n,
        alpha=_state_values(alpha),
        beta=_state_values(beta),
        gamma=_state_values(gamma),
        delta=_state_values(delta),
        xi=_state_values(xi),
        mu=_state_values(mu),
        z=None if z is None else _state_values(z),
        flag=True,
        symb_index=trigger_row,
        # the float lane compared rows 0 .. trigger_row, then never again
        eps=eps,
        eps_checks=trigger_row + 1,
    )


def _state_values(values) -> list:
    """Symbol-independent quantities are reported as plain floats."""
    return [v if isinstance(v, Scalar) else fraction_to_float(v) for v in values]


def back_substitute(state: SweepState) -> list:
    """Upward sweep; returns the solution components (floats or Scalars)."""
    if state.z is None:
        raise ContractViolationError("sweep state carries no right-hand side")
    n = state.n
    alpha, beta, gamma, z = state.alpha, state.beta, state.gamma, state.z
    x = [0.0] * n
    with degree_limit(2 * n):
        x[n - 1] = z[n - 1]
        x[n - 2] = z[n - 2] - alpha[n - 2] * x[n - 1]
        x[n - 3] = z[n - 3] - alpha[n - 3] * x[n - 2] - beta[n - 3] * x[n - 1]
        for j in range(n - 4, -1, -1):
            x[j] = z[j] - alpha[j] * x[j + 1] - beta[j] * x[j + 2] - gamma[j] * x[j + 3]
    return x


def finalize(components) -> np.ndarray:
    """Cancel, substitute symbol = 0, and return a plain float vector.

    A pole surviving cancellation certifies that the matrix was singular
    (a nonsingular system always has a finite solution), so it is reported
    as a SingularMatrixError.
    """
    out = np.empty(len(components), dtype=np.float64)
    for i, v in enumerate(components):
        if isinstance(v, Scalar):
            try:
                out[i] = v.substitute_zero()
            except PoleAtZeroError as exc:
                raise SingularMatrixError(
                    f"solution component {i} keeps a pole at the substitution "
                    "point after cancellation; the matrix is singular"
                ) from exc
        else:
            out[i] = v
    if not np.isfinite(out).all():
        idx = int(np.flatnonzero(~np.isfinite(out))[0])
        raise NonFiniteEntryError(f"solution component {idx} is not finite")
    return out


def _evaluate_determinant(state: SweepState):
    """Pivot product, cancelled and evaluated at symbol = 0.

    Returns ``(det_float, exactly_zero)``.  ``exactly_zero`` can only be
    decided on the symbolic path, where the product is exact; on the pure
    numeric path every pivot passed the eps test, so the matrix is
    treated as nonsingular regardless of float under/overflow.
    """
    if not state.flag:
        return math.prod(state.mu), False
    acc = reduce(operator.mul, state.mu)
    value = acc.value.eval_at_zero() if acc.is_symbolic else Fraction(acc.value)
    return fraction_to_float(value), value == 0


def determinant(m: HeptaMatrix, eps: float = DEFAULT_EPS) -> float:
    """det(A) as the product of the sweep pivots at symbol = 0."""
    state = _forward(m, None, eps)
    return _evaluate_determinant(state)[0]


def solve(m, y, eps: float = DEFAULT_EPS) -> SolveReport:
    """Solve A x = y and report solution, determinant and residual.

    ``m`` is a HeptaMatrix or a square dense array; dense inputs smaller
    than the banded minimum are solved by the exact dense routine.
    """
    if not isinstance(m, HeptaMatrix):
        dense = np.array(m, dtype=np.float64)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ContractViolationError(f"expected a square matrix, got shape {dense.shape}")
        if dense.shape[0] >= MIN_N:
            m = from_dense(dense)
        else:
            if eps <= 0:
                raise ContractViolationError(f"eps must be positive, got {eps}")
            return _solve_small_dense(dense, as_vector(y, dense.shape[0]), eps)

    y = as_vector(y, m.n)
    state = _forward(m, y, eps)
    det, exactly_zero = _evaluate_determinant(state)
    if exactly_zero:
        raise SingularMatrixError(
            "pivot product is exactly zero after cancellation; the matrix is singular"
        )
    x = finalize(back_substitute(state))
    residual = float(np.max(np.abs(matvec(m, x) - y)))
    x.setflags(write=False)
    return SolveReport(
        x=x,
        det=det,
        residual_inf=residual,
        used_symbolic=state.flag,
        symb_index=state.symb_index,
        eps_used=eps,
    )


def _solve_small_dense(dense: np.ndarray, y: np.ndarray, eps: float) -> SolveReport:
    em = ExactMatrix.from_rows(dense)
    sol = exact_solve(em, [Fraction(float(v)) for v in y])
    x = np.array([fraction_to_float(v) for v in sol])
    det = fraction_to_float(exact_determinant(em))
    residual = float(np.max(np.abs(dense @ x - y)))
    x.setflags(write=False)
    return SolveReport(
        x=x,
        det=det,
        residual_inf=residual,
        used_symbolic=False,
        symb_index=None,
        eps_used=eps,
    )
