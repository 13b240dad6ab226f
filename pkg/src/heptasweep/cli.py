"""Command line interface: solve, det, gen, bench, check.

Exit codes: 0 success, 2 singular matrix, 3 symbolic breakdown,
64 usage error, 74 unreadable or malformed input file.  ``check``
additionally exits 1 when the recomputed residual exceeds the tolerance.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import fileio
from .errors import (
    BandwidthViolationError,
    DimensionMismatchError,
    FileFormatError,
    NonFiniteEntryError,
    SingularMatrixError,
    SymbolicBreakdownError,
)
from .generators import GenSpec, generate
from .matrix import MIN_N, matvec
from .sweep import DEFAULT_EPS, determinant, solve

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_SINGULAR = 2
EXIT_BREAKDOWN = 3
EXIT_USAGE = 64
EXIT_IO = 74

_LOAD_ERRORS = (
    OSError,
    FileFormatError,
    BandwidthViolationError,
    DimensionMismatchError,
    NonFiniteEntryError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark row: median wall time of ``repeats`` solves at size n."""

    n: int
    seconds: float
    repeats: int
    residual_inf: float
    used_symbolic: bool
    eps: float


def run_bench(family: str, sizes, repeats: int, seed: int = 1, eps: float = DEFAULT_EPS):
    """Time ``solve`` (generation excluded) for each size; median of repeats."""
    records = []
    for k, n in enumerate(sizes):
        spec = GenSpec(family=family, n=int(n), seed=seed + k)
        m = generate(spec).matrix
        y = matvec(m, np.ones(m.n))
        times = []
        report = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            report = solve(m, y, eps)
            times.append(time.perf_counter() - t0)
        records.append(
            BenchRecord(
                n=int(n),
                seconds=statistics.median(times),
                repeats=repeats,
                residual_inf=report.residual_inf,
                used_symbolic=report.used_symbolic,
                eps=eps,
            )
        )
    return records


def _build_parser() -> _Parser:
    parser = _Parser(prog="heptasweep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve A x = y")
    p.add_argument("--in", dest="infile", required=True, help="matrix file (.json banded or Matrix Market)")
    p.add_argument("--rhs", help="right-hand side file (else taken from the matrix file)")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS, help="pivot threshold")
    p.add_argument("--out", help="write the solution report to this JSON file")
    p.add_argument("--json", action="store_true", help="machine-readable stdout")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("det", help="print the determinant")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.set_defaults(func=_cmd_det)

    p = sub.add_parser("gen", help="emit a test matrix")
    p.add_argument("--family", required=True, help="random_dd | fd6_laplacian | toeplitz | planted_zero_minors")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dominance", type=float, default=1.5)
    p.add_argument("--h", dest="spacing", type=float, default=1.0, help="grid spacing (fd6_laplacian)")
    p.add_argument("--stencil", help="7 comma-separated values, offsets -3..3 (toeplitz)")
    p.add_argument("--zero-at", dest="zero_at", help="comma-separated minor indices (planted_zero_minors)")
    p.add_argument("--rhs", choices=("none", "ones", "random"), default="none", help="also emit a right-hand side")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="time the solver across sizes")
    p.add_argument("--family", default="random_dd")
    p.add_argument("--sizes", required=True, help="comma-separated system sizes")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("check", help="recompute the residual of a solution")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--x", dest="xfile", required=True)
    p.add_argument("--tol", type=float, help="absolute bound; default 1e-7 * (1 + max|y|)")
    p.set_defaults(func=_cmd_check)

    return parser


def _load_matrix(path):
    bf = fileio.load_matrix_file(path)
    return (bf.to_matrix() if bf.n >= MIN_N else bf.to_dense()), bf


def _residual(m, x, y) -> float:
    ax = matvec(m, x) if not isinstance(m, np.ndarray) else m @ np.asarray(x)
    return float(np.max(np.abs(ax - np.asarray(y))))


def _cmd_solve(args) -> int:
    m, bf = _load_matrix(args.infile)
    if args.rhs is not None:
        y = fileio.read_vector(args.rhs)
    elif bf.y is not None:
        y = bf.y
    else:
        raise _UsageError("no right-hand side: pass --rhs or store 'y' in the matrix file")
    report = solve(m, y, eps=args.eps)
    if args.out:
        fileio.write_solution(args.out, report, bf.n)
    if args.json:
        doc = {
            "n": bf.n,
            "x": [float(v) for v in report.x],
            "det": report.det,
            "residual_inf": report.residual_inf,
            "used_symbolic": report.used_symbolic,
            "symb_index": report.symb_index,
            "eps": report.eps_used,
        }
        print(json.dumps(doc))
        return EXIT_OK
    print(f"n            : {bf.n}")
    print(f"det          : {report.det!r}")
    print(f"residual_inf : {report.residual_inf:.3e}")
    print(f"used_symbolic: {report.used_symbolic}")
    print(f"symb_index   : {report.symb_index}")
    print(f"eps          : {report.eps_used!r}")
    if args.out:
        print(f"solution written to {args.out}")
    else:
        print("x:")
        for v in report.x:
            print(f"  {float(v)!r}")
    return EXIT_OK


def _cmd_det(args) -> int:
    m, _ = _load_matrix(args.infile)
    if isinstance(m, np.ndarray):
        from .exact import ExactMatrix, exact_determinant
        from .symbolic import fraction_to_float

        value = fraction_to_float(exact_determinant(ExactMatrix.from_rows(m)))
    else:
        value = determinant(m, eps=args.eps)
    print(repr(value))
    return EXIT_OK


def _parse_floats(text):
    return tuple(float(t) for t in text.split(",") if t.strip())


def _parse_ints(text):
    return tuple(int(t) for t in text.split(",") if t.strip())


def _cmd_gen(args) -> int:
    family = args.family.replace("-", "_")
    try:
        spec = GenSpec(
            family=family,
            n=args.n,
            seed=args.seed,
            dominance=args.dominance,
            spacing=args.spacing,
            stencil=_parse_floats(args.stencil) if args.stencil else (),
            zero_at=_parse_ints(args.zero_at) if args.zero_at else (),
        )
    except (ValueError, TypeError) as exc:
        raise _UsageError(str(exc)) from exc
    result = generate(spec)
    m = result.matrix
    y = None
    if args.rhs == "ones":
        y = matvec(m, np.ones(m.n))
    elif args.rhs == "random":
        y = np.random.default_rng([args.seed, 1]).uniform(-1.0, 1.0, m.n)
    fileio.write_banded(args.out, m, y)
    if result.minors is not None:
        cert = {
            "family": family,
            "n": spec.n,
            "seed": spec.seed,
            "zero_at": list(spec.zero_at),
            "minors": [str(fr) for fr in result.minors],
        }
        with open(f"{args.out}.cert.json", "w", encoding="ascii") as fh:
            json.dump(cert, fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.out} (+ certificate {args.out}.cert.json)")
    else:
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    family = args.family.replace("-", "_")
    sizes = _parse_ints(args.sizes)
    if not sizes:
        raise _UsageError("--sizes must list at least one size")
    if args.repeat < 1:
        raise _UsageError("--repeat must be at least 1")
    records = run_bench(family, sizes, args.repeat, seed=args.seed, eps=args.eps)
    if args.json:
        print(json.dumps([asdict(r) for r in records]))
        return EXIT_OK
    print(f"{'n':>10} {'median_s':>12} {'repeats':>8} {'residual':>12} {'symbolic':>9} {'eps':>9}")
    for r in records:
        print(
            f"{r.n:>10} {r.seconds:>12.6f} {r.repeats:>8} "
            f"{r.residual_inf:>12.3e} {str(r.used_symbolic):>9} {r.eps:>9.1e}"
        )
    return EXIT_OK


def _cmd_check(args) -> int:
    m, _ = _load_matrix(args.infile)
    y = fileio.read_vector(args.rhs)
    x = fileio.read_vector(args.xfile)
    residual = _residual(m, x, y)
    bound = args.tol if args.tol is not None else 1e-7 * (1.0 + float(np.max(np.abs(y))))
    print(f"residual_inf : {residual!r}")
    print(f"bound        : {bound!r}")
    if residual <= bound:
        print("check        : PASS")
        return EXIT_OK
    print("check        : FAIL")
    return EXIT_FAILED


def cli_main(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularMatrixError as exc:
        print(f"singular matrix: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except SymbolicBreakdownError as exc:
        print(f"symbolic breakdown: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except _LOAD_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
