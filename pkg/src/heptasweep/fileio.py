"""File formats: native banded JSON and Matrix Market coordinate files.

The native format is a single JSON object::

    {"format": "hepta-banded", "version": 1, "n": 7,
     "c_lo": [...], "b_lo": [...], "a_lo": [...], "d": [...],
     "a_up": [...], "b_up": [...], "c_up": [...],
     "y": [...]}            # optional right-hand side

Floats are serialized as shortest-round-trip decimal literals (Python's
repr, which the json module uses), so reading a written file reconstructs
every bit pattern exactly.  Matrix Market files use the coordinate format
(1-based indices, duplicates summed, explicit zeros dropped); values are
written with repr as well, so cross-format round trips are also bit-exact.
Negative zero is not preserved by the Matrix Market writer since zeros are
never written.

The banded format permits any n >= 1 (diagonal lengths are clamped at
zero); systems below the seven-diagonal minimum are solved densely.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    BandwidthViolationError,
    DimensionMismatchError,
    FileFormatError,
    NonFiniteEntryError,
)
from .matrix import MIN_N, HeptaMatrix, as_vector

BANDED_FORMAT = "hepta-banded"
BANDED_VERSION = 1

#: Diagonal keys in file order with their offsets from the main diagonal.
KEY_OFFSETS = {
    "c_lo": -3,
    "b_lo": -2,
    "a_lo": -1,
    "d": 0,
    "a_up": 1,
    "b_up": 2,
    "c_up": 3,
}


def _diag_len(n: int, off: int) -> int:
    return max(0, n - abs(off))


@dataclass
class BandedFile:
    """In-memory image of one banded file: size, seven diagonals, optional rhs."""

    n: int
    diagonals: dict
    y: np.ndarray | None = None

    @classmethod
    def from_matrix(cls, m: HeptaMatrix, y=None) -> "BandedFile":
        diags = {
            "c_lo": m.c_lo,
            "b_lo": m.b_lo,
            "a_lo": m.a_lo,
            "d": m.d,
            "a_up": m.a_up,
            "b_up": m.b_up,
            "c_up": m.c_up,
        }
        return cls(n=m.n, diagonals=diags, y=None if y is None else as_vector(y, m.n))

    def to_matrix(self) -> HeptaMatrix:
        if self.n < MIN_N:
            raise DimensionMismatchError(
                f"n={self.n} is below the banded minimum {MIN_N}; use to_dense()"
            )
        g = self.diagonals
        return HeptaMatrix(
            n=self.n,
            d=g["d"],
            a_up=g["a_up"],
            b_up=g["b_up"],
            c_up=g["c_up"],
            a_lo=g["a_lo"],
            b_lo=g["b_lo"],
            c_lo=g["c_lo"],
        )

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for key, off in KEY_OFFSETS.items():
            arr = self.diagonals[key]
            if len(arr):
                out += np.diag(arr, off)
        return out


def _check_banded(bf: BandedFile) -> BandedFile:
    if bf.n < 1:
        raise FileFormatError(f"system size must be positive, got {bf.n}")
    for key, off in KEY_OFFSETS.items():
        arr = np.array(bf.diagonals[key], dtype=np.float64)
        want = _diag_len(bf.n, off)
        if arr.ndim != 1 or arr.shape[0] != want:
            raise FileFormatError(
                f"diagonal '{key}' must have length {want} for n={bf.n}, got {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise NonFiniteEntryError(f"diagonal '{key}' has a non-finite entry")
        bf.diagonals[key] = arr
    if bf.y is not None:
        bf.y = as_vector(bf.y, bf.n)
    return bf


def write_banded(path, m, y=None) -> None:
    """Write a HeptaMatrix or BandedFile as native banded JSON (bit-exact)."""
    bf = m if isinstance(m, BandedFile) else BandedFile.from_matrix(m, y)
    _check_banded(bf)
    doc = {"format": BANDED_FORMAT, "version": BANDED_VERSION, "n": bf.n}
    for key in KEY_OFFSETS:
        doc[key] = bf.diagonals[key].tolist()
    if bf.y is not None:
        doc["y"] = bf.y.tolist()
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, allow_nan=False)
        fh.write("\n")


def read_banded(path) -> BandedFile:
    """Read native banded JSON; raises FileFormatError on any malformation."""
    with open(path, "r", encoding="ascii") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise FileFormatError("banded file must be a JSON object")
    version = doc.get("version")
    if version != BANDED_VERSION:
        raise FileFormatError(
            f"unsupported banded format version {version!r} (expected {BANDED_VERSION})"
        )
    if "n" not in doc or not isinstance(doc["n"], int):
        raise FileFormatError("missing or non-integer size field 'n'")
    diags = {}
    for key in KEY_OFFSETS:
        if key not in doc:
            raise FileFormatError(f"missing diagonal array '{key}'")
        diags[key] = doc[key]
    y = doc.get("y")
    bf = BandedFile(n=doc["n"], diagonals=diags, y=None if y is None else y)
    return _check_banded(bf)


# -- Matrix Market ------------------------------------------------------


def write_matrix_market(path, m: HeptaMatrix, comment: str | None = None) -> None:
    """Write the nonzero entries in coordinate format (1-based, repr values)."""
    bf = BandedFile.from_matrix(m)
    entries = []
    for key, off in KEY_OFFSETS.items():
        arr = bf.diagonals[key]
        for k, v in enumerate(arr):
            i = k - min(off, 0)  # row index of element k on this diagonal
            j = i + off
            if v != 0.0:
                entries.append((i + 1, j + 1, float(v)))
    entries.sort()
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{m.n} {m.n} {len(entries)}\n")
        for i, j, v in entries:
            fh.write(f"{i} {j} {v!r}\n")


def _read_mm(path) -> BandedFile:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.readlines()
    if not lines:
        raise FileFormatError("empty file", line=1)
    header = lines[0].strip().split()
    if len(header) != 5 or header[0] != "%%MatrixMarket":
        raise FileFormatError("missing '%%MatrixMarket' header", line=1)
    kind = [t.lower() for t in header[1:]]
    if kind[0] != "matrix" or kind[1] != "coordinate":
        raise FileFormatError(f"unsupported object/format {header[1]}/{header[2]}", line=1)
    if kind[2] not in ("real", "integer"):
        raise FileFormatError(f"unsupported field type '{header[3]}'", line=1)
    if kind[3] != "general":
        raise FileFormatError(f"unsupported symmetry '{header[4]}'", line=1)

    lineno = 1
    idx = 1
    while idx < len(lines) and (lines[idx].lstrip().startswith("%") or not lines[idx].strip()):
        idx += 1
    if idx >= len(lines):
        raise FileFormatError("missing size line", line=len(lines))
    lineno = idx + 1
    parts = lines[idx].split()
    try:
        rows, cols, nnz = (int(p) for p in parts)
    except ValueError as exc:
        raise FileFormatError("size line must hold three integers", line=lineno) from exc
    if rows != cols:
        raise FileFormatError(f"matrix must be square, got {rows}x{cols}", line=lineno)
    n = rows

    diags = {key: [0.0] * _diag_len(n, off) for key, off in KEY_OFFSETS.items()}
    offset_key = {off: key for key, off in KEY_OFFSETS.items()}
    seen = 0
    for idx in range(idx + 1, len(lines)):
        lineno = idx + 1
        raw = lines[idx].strip()
        if not raw or raw.startswith("%"):
            continue
        parts = raw.split()
        if len(parts) != 3:
            raise FileFormatError("entry line must hold 'row col value'", line=lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            v = float(parts[2])
        except ValueError as exc:
            raise FileFormatError(f"cannot parse entry {raw!r}", line=lineno) from exc
        if not (1 <= i <= n and 1 <= j <= n):
            raise FileFormatError(f"coordinate ({i}, {j}) out of range for n={n}", line=lineno)
        off = j - i
        if abs(off) > 3:
            raise BandwidthViolationError(
                i, j, f"line {lineno}: nonzero entry outside the band at ({i}, {j})"
            )
        # storage slot: row index for superdiagonals, column index for sub
        k = (i - 1) if off >= 0 else (j - 1)
        diags[offset_key[off]][k] += v
        seen += 1
    if seen != nnz:
        raise FileFormatError(f"expected {nnz} entries, found {seen}", line=lineno)
    return _check_banded(BandedFile(n=n, diagonals=diags))


def read_matrix_market(path) -> HeptaMatrix:
    """Read a coordinate-format file into a HeptaMatrix (n >= 7)."""
    return _read_mm(path).to_matrix()


def load_matrix_file(path) -> BandedFile:
    """Sniff a file (JSON vs Matrix Market) and load it."""
    with open(path, "r", encoding="ascii") as fh:
        head = fh.read(64).lstrip()
    if head.startswith("%"):
        return _read_mm(path)
    if head.startswith("{"):
        return read_banded(path)
    raise FileFormatError(f"unrecognized matrix file format in {os.fspath(path)!r}")


# -- vectors and solution files -----------------------------------------


def write_vector_mm(path, v) -> None:
    """Write a vector as a Matrix Market array file (n x 1)."""
    v = as_vector(v)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix array real general\n")
        fh.write(f"{len(v)} 1\n")
        for t in v:
            fh.write(f"{float(t)!r}\n")


def read_vector(path) -> np.ndarray:
    """Read a right-hand side or solution vector.

    Accepts a Matrix Market array file (n x 1), a bare JSON array, or a
    JSON object carrying ``"y"`` or ``"x"``.
    """
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    head = text.lstrip()[:1]
    if head == "%":
        return _read_vector_mm(text)
    if head in ("{", "["):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
        if isinstance(doc, list):
            return as_vector(doc)
        if isinstance(doc, dict):
            for key in ("y", "x"):
                if key in doc:
                    return as_vector(doc[key])
            raise FileFormatError("JSON object holds neither 'y' nor 'x'")
    raise FileFormatError(f"unrecognized vector file format in {os.fspath(path)!r}")


def _read_vector_mm(text: str) -> np.ndarray:
    lines = text.splitlines()
    header = lines[0].strip().split()
    kind = [t.lower() for t in header[1:]]
    if len(header) != 5 or header[0] != "%%MatrixMarket" or kind[1] != "array":
        raise FileFormatError("expected a Matrix Market array header", line=1)
    if kind[2] not in ("real", "integer") or kind[3] != "general":
        raise FileFormatError("expected a real general array", line=1)
    idx = 1
    while idx < len(lines) and (lines[idx].lstrip().startswith("%") or not lines[idx].strip()):
        idx += 1
    if idx >= len(lines):
        raise FileFormatError("missing size line", line=len(lines))
    parts = lines[idx].split()
    try:
        rows, cols = (int(p) for p in parts)
    except ValueError as exc:
        raise FileFormatError("array size line must hold two integers", line=idx + 1) from exc
    if cols != 1:
        raise FileFormatError(f"expected a single column, got {cols}", line=idx + 1)
    values = []
    for lineno in range(idx + 1, len(lines)):
        raw = lines[lineno].strip()
        if not raw or raw.startswith("%"):
            continue
        try:
            values.append(float(raw))
        except ValueError as exc:
            raise FileFormatError(f"cannot parse value {raw!r}", line=lineno + 1) from exc
    if len(values) != rows:
        raise FileFormatError(f"expected {rows} values, found {len(values)}")
    return as_vector(values)


def write_solution(path, report, n: int) -> None:
    """Write a solve report as JSON; ``read_vector`` can recover x from it."""
    doc = {
        "version": BANDED_VERSION,
        "n": n,
        "x": [float(v) for v in report.x],
        "det": report.det,
        "residual_inf": report.residual_inf,
        "used_symbolic": report.used_symbolic,
        "symb_index": report.symb_index,
        "eps": report.eps_used,
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, allow_nan=True)
        fh.write("\n")
