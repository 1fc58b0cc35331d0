"""Heuristic lower bounds on ``||X||_{2->qbar}`` (and ``p -> q`` norms).

Nothing here is used by a certificate; these routines only produce unit
vectors whose objective value is a valid lower bound.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidArgumentError, as_data_matrix, check_even_q, expectation_q_norm, row_norms
from .spectral import random_unit

ASCENT_MAX_ITER = 500
ASCENT_TOL = 1e-12
RESTARTS = 64


@dataclass(frozen=True)
class OracleResult:
    value: float
    vector: np.ndarray
    restarts_used: int
    ascent_iterations_total: int
    converged_fraction: float
    grid_error_bound: float | None = None

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "vector": [float(c) for c in self.vector],
            "restarts_used": self.restarts_used,
            "ascent_iterations_total": self.ascent_iterations_total,
            "converged_fraction": self.converged_fraction,
        }
        if self.grid_error_bound is not None:
            out["grid_error_bound"] = self.grid_error_bound
        return out


def _ascend_batch(X, q, V, max_iter, tol, rng):
    """Fixed-point ascent ``v <- normalize(mean_i <x_i,v>^(q-1) x_i)`` on the columns of ``V``.

    ``X`` must be prescaled (row norms <= 1).  Returns the best iterate per
    column, its objective ``mean <x_i,v>^q``, iteration counts and a
    converged flag.
    """
    n, d = X.shape
    V = np.array(V, dtype=np.float64, copy=True)
    k = V.shape[1]
    Y = X @ V
    f = np.mean(Y**q, axis=0)
    iters = np.zeros(k, dtype=np.int64)
    conv = np.zeros(k, dtype=bool)
    active = np.arange(k)
    for t in range(1, max_iter + 1):
        Ya = Y[:, active] if active.size < k else Y
        grad = X.T @ Ya ** (q - 1) / n
        gn = np.linalg.norm(grad, axis=0)
        dead = gn == 0.0
        if np.any(dead):
            # start is orthogonal to every row's contribution; perturb it
            for j in np.flatnonzero(dead):
                grad[:, j] = V[:, active[j]] + 1e-3 * random_unit(d, rng)
            gn = np.linalg.norm(grad, axis=0)
        W = grad / gn
        Yw = X @ W
        fw = np.mean(Yw**q, axis=0)
        iters[active] = t
        fa = f[active]
        better = fw > fa
        idx = active[better]
        V[:, idx] = W[:, better]
        Y[:, idx] = Yw[:, better]
        f[idx] = fw[better]
        # stop on small relative gain, or on a roundoff decrease (best kept)
        stop = ~better | (fw - fa <= tol * fa)
        conv[active[stop & ~dead]] = True
        active = active[~stop]
        if active.size == 0:
            break
    return V, f, iters, conv


def ascend(X, q, start, max_iter=ASCENT_MAX_ITER, tol=ASCENT_TOL, seed=0):
    """Single-start ascent; returns ``(value, unit_vector)``."""
    X = as_data_matrix(X)
    q = check_even_q(q)
    s = float(row_norms(X).max())
    v = np.asarray(start, dtype=np.float64)
    v = v / np.linalg.norm(v)
    if s == 0.0:
        return 0.0, v
    V, f, _, _ = _ascend_batch(X / s, q, v[:, None], max_iter, tol, np.random.default_rng(seed))
    vec = V[:, 0]
    return expectation_q_norm(X @ vec, q), vec


def oracle_lower_bound(
    X,
    q,
    restarts=RESTARTS,
    seed=0,
    warm_starts=None,
    max_iter=ASCENT_MAX_ITER,
    tol=ASCENT_TOL,
    batch=256,
    warm_top=None,
) -> OracleResult:
    """Best of ascents from every warm start and ``restarts`` random sphere points.

    ``warm_starts`` may be a ``ProxyList`` or an ``(m, d)`` array of
    directions.  With a ``ProxyList``, ``warm_top`` keeps only its that many
    highest-valued entries; the ascent is monotone, so the result still
    dominates the list maximum.  Ties go to the lowest start index (warm
    starts first).
    """
    X = as_data_matrix(X)
    q = check_even_q(q)
    if restarts < 1:
        raise InvalidArgumentError("restarts must be >= 1")
    n, d = X.shape
    rng = np.random.default_rng(seed)
    starts = []
    if warm_starts is not None:
        W = np.asarray(getattr(warm_starts, "vectors", warm_starts), dtype=np.float64)
        values = getattr(warm_starts, "values", None)
        if warm_top is not None and values is not None:
            W = W[np.sort(np.argsort(-values, kind="stable")[: max(1, int(warm_top))])]
        starts.append(W)
    starts.append(rng.standard_normal((restarts, d)))
    S = np.concatenate(starts, axis=0)
    S = S / np.linalg.norm(S, axis=1, keepdims=True)

    s = float(row_norms(X).max())
    if s == 0.0:
        return OracleResult(0.0, S[0], restarts, 0, 1.0)
    Xs = X / s
    best_f, best_v = -1.0, S[0]
    total_iters, n_conv = 0, 0
    for start in range(0, S.shape[0], batch):
        V, f, it, conv = _ascend_batch(Xs, q, S[start:start + batch].T, max_iter, tol, rng)
        j = int(np.argmax(f))
        if f[j] > best_f:
            best_f, best_v = float(f[j]), V[:, j].copy()
        total_iters += int(it.sum())
        n_conv += int(conv.sum())
    return OracleResult(
        value=expectation_q_norm(X @ best_v, q),
        vector=best_v,
        restarts_used=restarts,
        ascent_iterations_total=total_iters,
        converged_fraction=n_conv / S.shape[0],
    )


def _angle_grid(grid_points):
    theta = np.arange(grid_points) * (np.pi / grid_points)
    return np.stack([np.cos(theta), np.sin(theta)])


def grid_oracle_2d(X, q, grid_points=100_000, chunk=4096) -> OracleResult:
    """Exhaustive search over ``(cos t, sin t)``, ``t`` on a uniform grid of ``[0, pi)``.

    ``grid_error_bound`` bounds the gap to the true supremum: the objective
    is ``max_i |x_i|``-Lipschitz in ``t``.
    """
    X = as_data_matrix(X)
    q = check_even_q(q)
    if X.shape[1] != 2:
        raise InvalidArgumentError(f"grid oracle needs d = 2, got d = {X.shape[1]}")
    if grid_points < 1000:
        raise InvalidArgumentError("grid_points must be >= 1000")
    s = float(row_norms(X).max())
    Xs = X / s if s > 0 else X
    V = _angle_grid(grid_points)
    best_f, best_k = -1.0, 0
    for start in range(0, grid_points, chunk):
        f = np.mean((Xs @ V[:, start:start + chunk]) ** q, axis=0)
        j = int(np.argmax(f))
        if f[j] > best_f:
            best_f, best_k = float(f[j]), start + j
    vec = V[:, best_k]
    return OracleResult(
        value=expectation_q_norm(X @ vec, q),
        vector=vec,
        restarts_used=0,
        ascent_iterations_total=0,
        converged_fraction=1.0,
        grid_error_bound=s * 0.5 * np.pi / grid_points,
    )


def pq_ratio(X, v, p, q) -> float:
    """``||X v||_q / ||v||_p`` in standard (unnormalized) norms."""
    v = np.asarray(v, dtype=np.float64)
    return float(np.linalg.norm(X @ v, ord=q) / np.linalg.norm(v, ord=p))


def grid_oracle_pq_2d(X, p, q, grid_points=100_000, candidates=None, chunk=4096):
    """Grid search of ``||Xv||_q / ||v||_p`` over directions in the plane.

    The ratio is scale invariant so a half-circle of directions covers the
    whole ``l_p`` sphere.  ``candidates`` (e.g. certificate list vectors) are
    evaluated too.  Returns ``(value, v)`` with ``||v||_p = 1``.
    """
    X = as_data_matrix(X)
    if X.shape[1] != 2:
        raise InvalidArgumentError(f"grid oracle needs d = 2, got d = {X.shape[1]}")
    V = _angle_grid(grid_points)
    if candidates is not None:
        V = np.concatenate([V, np.asarray(candidates, dtype=np.float64).T], axis=1)
    best, best_k = -1.0, 0
    for start in range(0, V.shape[1], chunk):
        Vc = V[:, start:start + chunk]
        r = np.linalg.norm(X @ Vc, ord=q, axis=0) / np.linalg.norm(Vc, ord=p, axis=0)
        j = int(np.argmax(r))
        if r[j] > best:
            best, best_k = float(r[j]), start + j
    v = V[:, best_k]
    return best, v / np.linalg.norm(v, ord=p)


def pq_oracle(X, p, q, restarts=16, seed=0, warm_starts=None):
    """Local maximization of ``log ||Xv||_q - log ||v||_p`` by L-BFGS from many starts.

    Returns ``(value, v)`` with ``||v||_p = 1``; never below the best start.
    """
    from scipy.optimize import minimize

    X = as_data_matrix(X)
    n, d = X.shape
    rng = np.random.default_rng(seed)
    starts = [rng.standard_normal((restarts, d))]
    if warm_starts is not None:
        starts.insert(0, np.asarray(getattr(warm_starts, "vectors", warm_starts), dtype=np.float64))
    S = np.concatenate(starts, axis=0)

    def neg_log_ratio(v):
        y = X @ v
        ay, av = np.abs(y), np.abs(v)
        sy, sv = np.sum(ay**q), np.sum(av**p)
        if sy == 0.0 or sv == 0.0:
            return np.inf, np.zeros_like(v)
        val = np.log(sy) / q - np.log(sv) / p
        grad = X.T @ (ay ** (q - 1) * np.sign(y)) / sy - av ** (p - 1) * np.sign(v) / sv
        return -val, -grad

    best, best_v = -1.0, S[0]
    for v0 in S:
        for v in (v0, minimize(neg_log_ratio, v0, jac=True, method="L-BFGS-B").x):
            if not np.all(np.isfinite(v)) or not np.any(v):
                continue
            r = pq_ratio(X, v, p, q)
            if r > best:
                best, best_v = r, v
    return best, best_v / np.linalg.norm(best_v, ord=p)
