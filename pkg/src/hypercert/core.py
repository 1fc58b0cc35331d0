"""Dense matrix helpers shared by every certificate.

A data matrix is an ``(n, d)`` float64 array whose rows are the data
vectors.  Expectation norms average over the ``n`` entries instead of
summing, ``||x||_qbar = (mean |x_i|^q)^(1/q)``.
"""
from __future__ import annotations

import numpy as np


class InvalidArgumentError(ValueError):
    """Raised for out-of-domain arguments (bad q, wrong shape, NaN entries)."""


class DegenerateInputError(ValueError):
    """Raised when the data matrix is identically zero."""


class CapacityError(RuntimeError):
    """Raised when an explicit size cap would be exceeded."""


UNIT_TOL = 1e-9


def as_data_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise InvalidArgumentError(f"data matrix must be 2-d, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise InvalidArgumentError(f"data matrix must be non-empty, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("data matrix has non-finite entries")
    return X


def check_even_q(q) -> int:
    if int(q) != q or q < 2 or int(q) % 2:
        raise InvalidArgumentError(f"q must be an even integer >= 2, got {q!r}")
    return int(q)


def expectation_q_norm(x, q) -> float:
    """``(mean |x_i|^q)^(1/q)``; exactly 0 for the zero vector."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if q < 1:
        raise InvalidArgumentError(f"q must be >= 1, got {q!r}")
    if x.size == 0:
        raise InvalidArgumentError("empty vector")
    # Factor out the max entry so large q cannot overflow.
    m = np.max(np.abs(x))
    if m == 0.0:
        return 0.0
    return float(m * np.mean((np.abs(x) / m) ** q) ** (1.0 / q))


def expectation_q_norms(X: np.ndarray, V: np.ndarray, q) -> np.ndarray:
    """``||X v||_qbar`` for every column ``v`` of ``V``."""
    Y = np.abs(X @ V)
    if Y.ndim == 1:
        Y = Y[:, None]
    m = Y.max(axis=0)
    safe = np.where(m > 0, m, 1.0)
    return m * np.mean((Y / safe) ** q, axis=0) ** (1.0 / q)


def gram(X) -> np.ndarray:
    """Gram matrix ``G[i, j] = <x_i, x_j>``, exactly symmetric."""
    X = as_data_matrix(X)
    G = X @ X.T
    upper = np.triu(G)
    return upper + np.triu(G, 1).T


def gram_rows(X: np.ndarray, rows: slice) -> np.ndarray:
    """Rows ``rows`` of the Gram matrix without forming the rest."""
    return X[rows] @ X.T


def row_norms(X: np.ndarray) -> np.ndarray:
    return np.linalg.norm(X, axis=1)


def normalize_rows(X):
    """Unit-normalized nonzero rows.

    Returns ``(indices, Xbar, zero_rows)`` where ``Xbar[k]`` is row
    ``indices[k]`` divided by its Euclidean norm.
    """
    X = as_data_matrix(X)
    norms = row_norms(X)
    keep = norms > 0
    idx = np.flatnonzero(keep)
    return idx, X[keep] / norms[keep, None], np.flatnonzero(~keep)


def prescale(X):
    """Divide by the largest row norm; returns ``(X / s, s)``."""
    X = as_data_matrix(X)
    s = float(row_norms(X).max())
    if s == 0.0:
        raise DegenerateInputError("all-zero data matrix")
    return X / s, s


def normalize(v, ord=2) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    nrm = np.linalg.norm(v, ord=ord)
    if nrm == 0.0:
        raise InvalidArgumentError("cannot normalize the zero vector")
    return v / nrm


def is_unit(v, ord=2, tol=UNIT_TOL) -> bool:
    return abs(np.linalg.norm(np.asarray(v, dtype=np.float64), ord=ord) - 1.0) <= tol
