"""Matrix file formats.

CSV
    One row per line, comma-separated decimal floats.  An optional first
    line ``# n=<n> d=<d>`` is accepted (and checked when present).
Binary (``.m2qb``)
    Magic ``b"M2QB"``, little-endian u32 version (= 1), u64 n, u64 d,
    then ``n*d`` little-endian float64 values in row-major order.
"""
from __future__ import annotations

import hashlib
import re
import struct
from pathlib import Path

import numpy as np

from .core import InvalidArgumentError, as_data_matrix

MAGIC = b"M2QB"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")
_SHAPE_LINE = re.compile(r"#\s*n\s*=\s*(\d+)\s+d\s*=\s*(\d+)\s*$")


class MatrixFormatError(InvalidArgumentError):
    pass


def write_binary(path, X) -> None:
    X = as_data_matrix(X)
    n, d = X.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, n, d))
        fh.write(np.ascontiguousarray(X, dtype="<f8").tobytes())


def read_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise MatrixFormatError(f"{path}: truncated header")
    magic, version, n, d = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise MatrixFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise MatrixFormatError(f"{path}: unsupported version {version}")
    body = raw[_HEADER.size:]
    if len(body) != 8 * n * d:
        raise MatrixFormatError(f"{path}: expected {n * d} values, found {len(body) // 8}")
    X = np.frombuffer(body, dtype="<f8").reshape(n, d).astype(np.float64)
    return as_data_matrix(X)


def write_csv(path, X) -> None:
    X = as_data_matrix(X)
    n, d = X.shape
    with open(path, "w") as fh:
        fh.write(f"# n={n} d={d}\n")
        for row in X:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def read_csv(path) -> np.ndarray:
    rows = []
    declared = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _SHAPE_LINE.match(line)
                if m is None or rows or declared is not None:
                    raise MatrixFormatError(f"{path}:{lineno}: unexpected comment line")
                declared = (int(m.group(1)), int(m.group(2)))
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise MatrixFormatError(f"{path}:{lineno}: {exc}") from None
            if len(rows[-1]) != len(rows[0]):
                raise MatrixFormatError(
                    f"{path}:{lineno}: ragged row ({len(rows[-1])} vs {len(rows[0])} columns)"
                )
    if not rows:
        raise MatrixFormatError(f"{path}: no data rows")
    X = np.array(rows, dtype=np.float64)
    if declared is not None and declared != X.shape:
        raise MatrixFormatError(f"{path}: header says n, d = {declared}, data has {X.shape}")
    return as_data_matrix(X)


def _is_binary(path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == MAGIC


def read_matrix(path) -> np.ndarray:
    """Read either format, sniffing the magic bytes."""
    return read_binary(path) if _is_binary(path) else read_csv(path)


def write_matrix(path, X) -> None:
    """Write CSV for ``.csv`` paths, the binary format otherwise."""
    if str(path).lower().endswith(".csv"):
        write_csv(path, X)
    else:
        write_binary(path, X)


def checksum(X) -> str:
    X = np.ascontiguousarray(as_data_matrix(X), dtype="<f8")
    return hashlib.sha256(X.tobytes()).hexdigest()[:16]
