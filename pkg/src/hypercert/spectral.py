"""Top eigenpairs of PSD matrices by seeded power iteration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidArgumentError, as_data_matrix

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 5000
SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class SpectralWitness:
    lam: float
    vector: np.ndarray
    iterations: int
    residual: float
    converged: bool
    seed: int | None = None


def random_unit(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d)
    nrm = np.linalg.norm(v)
    while nrm == 0.0:
        v = rng.standard_normal(d)
        nrm = np.linalg.norm(v)
    return v / nrm


def start_vector(d: int, seed, index: int | None = None) -> np.ndarray:
    """Seeded start on the unit sphere; ``index`` derives an independent substream."""
    key = [int(seed)] if index is None else [int(seed), int(index)]
    return random_unit(d, np.random.default_rng(key))


def batched_power_iteration(Ms, starts, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Power iteration on a stack of PSD matrices, each stopped independently.

    Stops matrix ``k`` once ``|lam_{t+1} - lam_t| <= tol * lam_t`` and the
    residual ``|M v - lam v|`` is at most ``10 * tol * lam``.  The returned
    eigenvalue is the Rayleigh quotient of the returned vector.

    Returns ``(lams, vectors, iterations, residuals, converged)``.
    """
    Ms = np.asarray(Ms, dtype=np.float64)
    V = np.array(starts, dtype=np.float64, copy=True)
    b, d = V.shape
    lams = np.zeros(b)
    prev = np.full(b, np.nan)
    iters = np.zeros(b, dtype=np.int64)
    resid = np.zeros(b)
    done = np.zeros(b, dtype=bool)

    active = np.arange(b)
    for t in range(1, max_iter + 1):
        W = np.matmul(Ms[active], V[active, :, None])[:, :, 0]
        lam = np.einsum("kd,kd->k", V[active], W)
        wn = np.linalg.norm(W, axis=1)
        iters[active] = t
        lams[active] = lam
        resid[active] = np.linalg.norm(W - lam[:, None] * V[active], axis=1)

        rel = tol * np.abs(lam)
        stop = (wn == 0.0) | ((np.abs(lam - prev[active]) <= rel) & (resid[active] <= 10.0 * rel))
        done[active[stop]] = True
        prev[active] = lam
        keep = ~stop
        active, W, wn = active[keep], W[keep], wn[keep]
        if active.size == 0:
            break
        V[active] = W / wn[:, None]
    return lams, V, iters, resid, done


def _check_symmetric(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidArgumentError("matrix has non-finite entries")
    scale = max(np.max(np.abs(M)), np.finfo(float).tiny)
    if np.max(np.abs(M - M.T)) > SYMMETRY_TOL * scale:
        raise InvalidArgumentError("matrix is not symmetric")
    return M


def top_eigenpair_psd(M, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, seed=0) -> SpectralWitness:
    M = _check_symmetric(M)
    if tol <= 0 or max_iter < 1:
        raise InvalidArgumentError("tol must be positive and max_iter >= 1")
    v0 = start_vector(M.shape[0], seed)
    lam, V, it, res, conv = batched_power_iteration(M[None], v0[None], tol, max_iter)
    return SpectralWitness(float(lam[0]), V[0], int(it[0]), float(res[0]), bool(conv[0]), seed)


def top_singular_pair(X, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, seed=0):
    """Top singular triple of ``X`` via power iteration on ``X^T X``.

    Returns ``(sigma, right, left, witness)``; ``left`` is ``None`` for the
    zero matrix.
    """
    X = as_data_matrix(X)
    w = top_eigenpair_psd(X.T @ X, tol=tol, max_iter=max_iter, seed=seed)
    Xv = X @ w.vector
    sigma = float(np.linalg.norm(Xv))
    left = Xv / sigma if sigma > 0 else None
    return sigma, w.vector, left, w
