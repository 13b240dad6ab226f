"""O(N) solver for heptadiagonal linear systems with symbolic zero-pivot recovery."""

from .errors import (
    BandwidthViolationError,
    ContractViolationError,
    DegreeLimitError,
    DimensionMismatchError,
    FileFormatError,
    HeptaError,
    NonFiniteEntryError,
    PoleAtZeroError,
    RetriesExhaustedError,
    ScalarDivisionError,
    SingularMatrixError,
    SymbolicBreakdownError,
)
from .exact import ExactMatrix, exact_determinant, exact_matvec, exact_solve, leading_minors
from .fileio import (
    BandedFile,
    load_matrix_file,
    read_banded,
    read_matrix_market,
    read_vector,
    write_banded,
    write_matrix_market,
)
from .generators import (
    GenSpec,
    fd6_stencil,
    gen_fd6_laplacian,
    gen_planted_zero_minors,
    gen_random_dd,
    gen_toeplitz,
    generate,
)
from .matrix import (
    MIN_N,
    HeptaMatrix,
    Vector,
    as_vector,
    from_dense,
    matvec,
    to_dense,
    validate,
)
from .sweep import (
    DEFAULT_EPS,
    SolveReport,
    SweepState,
    back_substitute,
    determinant,
    finalize,
    forward_sweep,
    solve,
)
from .symbolic import (
    Poly,
    RationalFn,
    Scalar,
    add,
    div,
    is_numerically_zero,
    mul,
    poly_gcd,
    promote,
    sub,
    substitute_zero,
)

__version__ = "0.1.0"
