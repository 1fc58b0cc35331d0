"""Certified upper bounds and witnessed lower bounds for 2->q norms.

Every certificate here bounds ``||X||_{2->qbar} = sup_{|v|=1} ||Xv||_qbar``
for an ``(n, d)`` data matrix ``X`` and even ``q``.

``proxy_certificate`` builds a list ``L`` of ``2n' + d + 1`` unit vectors
(``n'`` nonzero rows)::

    e_1..e_d,  xbar_1..xbar_n,  u_1..u_n,  u

where ``u_i`` is the top eigenvector of
``M_i = mean_j <x_i, x_j>^(q-2) x_j x_j^T`` and ``u`` the top eigenvector
of ``Mtilde = mean_i ||M_i||_op x_i x_i^T``.  With
``B = max_{v in L} ||Xv||_qbar`` it holds that::

    B <= ||X||_{2->qbar} <= d^(1/4 - 1/(2q)) * B

The lower bound is witnessed by the maximizing list entry.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    CapacityError,
    InvalidArgumentError,
    as_data_matrix,
    check_even_q,
    row_norms,
)
from .spectral import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    batched_power_iteration,
    start_vector,
    top_eigenpair_psd,
    top_singular_pair,
)

NO_CONSISTENT = "NO-consistent"
YES_WITNESSED = "YES-witnessed"
INCONCLUSIVE = "inconclusive"

THREADS_ENV = "M2Q_THREADS"
MI_BLOCK = 128
EVAL_BLOCK = 512
MAX_FLATTEN_DIM = 4096
MAX_GRAM_ENTRIES = 10**8


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _ipow(A: np.ndarray, k: int) -> np.ndarray:
    """Elementwise ``A**k`` for a nonnegative integer ``k`` by repeated squaring."""
    result = np.ones_like(A)
    base = A
    first = True
    while k:
        if k & 1:
            result = base.copy() if first else result * base
            first = False
        k >>= 1
        if k:
            base = base * base
    return result


def _qbar_values(Y: np.ndarray, q: int) -> np.ndarray:
    # columns of Y are X @ v; entries are at most 1 in magnitude after prescale
    return np.mean(_ipow(Y, q), axis=0) ** (1.0 / q)


def evaluate_directions(X: np.ndarray, V: np.ndarray, q: int, block: int = EVAL_BLOCK) -> np.ndarray:
    """``||X v||_qbar`` for every row ``v`` of ``V``, in column blocks."""
    out = np.empty(V.shape[0])
    for start in range(0, V.shape[0], block):
        stop = min(start + block, V.shape[0])
        out[start:stop] = _qbar_values(X @ V[start:stop].T, q)
    return out


@dataclass(frozen=True)
class ProxyList:
    """Ordered candidate directions with provenance tags.

    ``tags[k]`` is one of ``("basis", r)``, ``("row", i)``, ``("eigMi", i)``,
    ``("eigMtilde", None)``.  ``values[k] = ||X vectors[k]||_qbar``.
    """

    vectors: np.ndarray
    tags: tuple
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.tags)

    def counts(self) -> dict:
        out = {"basis": 0, "row": 0, "eigMi": 0, "eigMtilde": 0}
        for kind, _ in self.tags:
            out[kind] += 1
        return out


def provenance(tag) -> str:
    kind, idx = tag
    return kind if idx is None else f"{kind}({idx})"


@dataclass(frozen=True)
class CertificateReport:
    method: str
    q: int
    n: int
    d: int
    factor: float
    certified_upper: float
    B: float | None = None
    best_direction: np.ndarray | None = None
    best_provenance: str | None = None
    alpha: float | None = None
    beta: float | None = None
    decision: str | None = None
    seed: int | None = None
    eig_tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "q": self.q,
            "n": self.n,
            "d": self.d,
            "factor": self.factor,
            "B": self.B,
            "certified_upper": self.certified_upper,
            "best_direction": None,
            "seed": self.seed,
            "tolerances": {"eig_tol": self.eig_tol, "max_iter": self.max_iter},
            "diagnostics": _jsonable(self.diagnostics),
        }
        if self.best_direction is not None:
            out["best_direction"] = {
                "provenance": self.best_provenance,
                "coords": [float(c) for c in self.best_direction],
            }
        if self.alpha is not None:
            out["alpha"] = self.alpha
            out["decision"] = self.decision
        if self.beta is not None:
            out["beta"] = self.beta
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def proxy_factor(d: int, q: int) -> float:
    return float(d) ** (0.25 - 1.0 / (2 * q))


def build_Mi(X, i: int, q, G=None) -> np.ndarray:
    """``M_i = mean_j <x_i, x_j>^(q-2) x_j x_j^T`` as ``X^T D_i X / n``."""
    X = as_data_matrix(X)
    q = check_even_q(q)
    n = X.shape[0]
    g = X @ X[i] if G is None else np.asarray(G)[i]
    w = _ipow(g, q - 2)
    return (X.T * w) @ X / n


def _outer_rows(X: np.ndarray) -> np.ndarray:
    n, d = X.shape
    return (X[:, :, None] * X[:, None, :]).reshape(n, d * d)


def _mi_block(Xs, P, rows, q, seed, tol, max_iter):
    """Top eigenpairs of ``M_i`` for the row indices ``rows``."""
    n, d = Xs.shape
    t0 = time.perf_counter()
    W = _ipow(Xs[rows] @ Xs.T, q - 2)
    t1 = time.perf_counter()
    Ms = (W @ P).reshape(len(rows), d, d) / n
    starts = np.stack([start_vector(d, seed, i) for i in rows])
    lams, U, iters, resid, conv = batched_power_iteration(Ms, starts, tol, max_iter)
    t2 = time.perf_counter()
    return lams, U, iters, resid, conv, t1 - t0, t2 - t1


def proxy_certificate(
    X,
    q,
    eig_tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
    seed=0,
    threads=None,
):
    """Proxy-list certificate for ``||X||_{2->qbar}``.

    Returns ``(ProxyList, CertificateReport)``.  Diagnostics carry the
    per-row ``||M_i||_op`` estimates (``mi_norms``, for the rows listed in
    ``mi_rows``), ``lambda_Mtilde`` and the worst relative eigen-residual,
    all in the units of the input ``X``.
    """
    X = as_data_matrix(X)
    q = check_even_q(q)
    n, d = X.shape
    threads = default_threads() if threads is None else max(1, int(threads))
    wall = {"gram": 0.0, "Mi_loop": 0.0, "Mtilde": 0.0, "list_eval": 0.0}

    norms = row_norms(X)
    s = float(norms.max())
    nz = np.flatnonzero(norms > 0)
    Xs = X / s if s > 0 else X.copy()

    # eig-M_i phase
    lams = np.zeros(nz.size)
    U = np.zeros((nz.size, d))
    resid = np.zeros(nz.size)
    iters = np.zeros(nz.size, dtype=np.int64)
    conv = np.ones(nz.size, dtype=bool)
    if nz.size:
        P = _outer_rows(Xs)
        blocks = [nz[k:k + MI_BLOCK] for k in range(0, nz.size, MI_BLOCK)]
        job = lambda rows: _mi_block(Xs, P, rows, q, seed, eig_tol, max_iter)  # noqa: E731
        if threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(job, blocks))
        else:
            results = [job(rows) for rows in blocks]
        pos = 0
        for lam_b, U_b, it_b, res_b, conv_b, tg, tm in results:
            k = lam_b.size
            lams[pos:pos + k] = lam_b
            U[pos:pos + k] = U_b
            iters[pos:pos + k] = it_b
            resid[pos:pos + k] = res_b
            conv[pos:pos + k] = conv_b
            pos += k
            wall["gram"] += tg
            wall["Mi_loop"] += tm

    # Mtilde phase; lams is in fixed row order so the sum is thread-independent
    t0 = time.perf_counter()
    A = (Xs[nz].T * lams) @ Xs[nz] / n
    Mtilde = 0.5 * (A + A.T)
    # Mtilde's start uses the substream one past the last row index
    mt_lam, mt_V, mt_it, mt_res, mt_conv = batched_power_iteration(
        Mtilde[None], start_vector(d, seed, n)[None], eig_tol, max_iter
    )
    mt_vec = mt_V[0]
    wall["Mtilde"] = time.perf_counter() - t0

    # list assembly and evaluation
    t0 = time.perf_counter()
    vectors = np.concatenate(
        [np.eye(d), X[nz] / norms[nz, None], U, mt_vec[None, :]], axis=0
    )
    tags = tuple(
        [("basis", r) for r in range(d)]
        + [("row", int(i)) for i in nz]
        + [("eigMi", int(i)) for i in nz]
        + [("eigMtilde", None)]
    )
    values = evaluate_directions(Xs, vectors, q) * s
    k = int(np.argmax(values))
    wall["list_eval"] = time.perf_counter() - t0

    rel = lambda r, lam: float(np.max(r / np.maximum(lam, np.finfo(float).tiny))) if r.size else 0.0  # noqa: E731
    B = float(values[k])
    factor = proxy_factor(d, q)
    plist = ProxyList(vectors=vectors, tags=tags, values=values)
    report = CertificateReport(
        method="proxy",
        q=q,
        n=n,
        d=d,
        factor=factor,
        B=B,
        certified_upper=factor * B,
        best_direction=vectors[k].copy(),
        best_provenance=provenance(tags[k]),
        seed=seed,
        eig_tol=eig_tol,
        max_iter=max_iter,
        diagnostics={
            "max_eig_residual": max(rel(resid, lams), rel(mt_res, mt_lam)),
            "lambda_Mtilde": float(mt_lam[0]) * s ** (2 * q),
            "mi_norms": lams * s ** (2 * q - 2),
            "mi_rows": nz,
            "eig_iterations": int(iters.sum() + mt_it.sum()),
            "unconverged": int((~conv).sum() + (~mt_conv).sum()),
            "list_size": len(tags),
            "scale": s,
            "wall_ms": {k_: 1000.0 * v for k_, v in wall.items()},
        },
    )
    return plist, report


def decide(report: CertificateReport, alpha=1.0, beta=None) -> CertificateReport:
    """Attach a YES/NO promise-problem decision to ``report``.

    ``B > alpha`` witnesses ``||X|| > alpha`` (YES).  Otherwise the norm is
    at most ``certified_upper``; that rules out YES when it is ``<= beta``
    (``beta`` defaults to ``factor * alpha``).
    """
    if not alpha > 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha!r}")
    if beta is not None and not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta!r}")
    limit = report.factor * alpha if beta is None else beta
    if report.B is not None and report.B > alpha:
        decision = YES_WITNESSED
    elif report.B is not None and beta is None:
        decision = NO_CONSISTENT
    elif report.certified_upper <= limit:
        decision = NO_CONSISTENT
    else:
        decision = INCONCLUSIVE
    return replace(report, alpha=float(alpha), beta=None if beta is None else float(beta), decision=decision)


def frobenius_Mv(X, v, q, G=None) -> float:
    """``sqrt(mean_{ij} <x_i,v>^2 <x_j,v>^2 <x_i,x_j>^(q-2))`` without the tensor ``M_v``."""
    X = as_data_matrix(X)
    q = check_even_q(q)
    n = X.shape[0]
    a = (X @ np.asarray(v, dtype=np.float64)) ** 2
    if G is None:
        total = 0.0
        for start in range(0, n, 1024):
            rows = slice(start, min(start + 1024, n))
            total += float(a[rows] @ (_ipow(X[rows] @ X.T, q - 2) @ a))
    else:
        total = float(a @ (_ipow(np.asarray(G), q - 2) @ a))
    return math.sqrt(max(total, 0.0)) / n


def baseline_certificate(
    X,
    q,
    eig_tol=1e-12,
    max_iter=DEFAULT_MAX_ITER,
    seed=0,
    max_gram_entries=MAX_GRAM_ENTRIES,
) -> CertificateReport:
    """Flattening certificate ``||mean_i x_i^{(q/2)} x_i^{(q/2)T}||_op^(1/q)``.

    Evaluated through the ``n x n`` kernel ``mean-scaled <x_i,x_j>^(q/2)``,
    which shares its nonzero spectrum with the ``d^(q/2)``-dimensional
    flattening.  No witness direction is produced.
    """
    X = as_data_matrix(X)
    q = check_even_q(q)
    n, d = X.shape
    if n * n > max_gram_entries:
        raise CapacityError(f"n^2 = {n * n} exceeds the Gram budget {max_gram_entries}")
    t0 = time.perf_counter()
    s = float(row_norms(X).max())
    if s == 0.0:
        lam_s, w = 0.0, None
    else:
        Xs = X / s
        G = Xs @ Xs.T
        K = _ipow(0.5 * (G + G.T), q // 2) / n
        w = top_eigenpair_psd(K, tol=eig_tol, max_iter=max_iter, seed=seed)
        lam_s = max(w.lam, 0.0)
    value = s * lam_s ** (1.0 / q)
    return CertificateReport(
        method="baseline",
        q=q,
        n=n,
        d=d,
        factor=float(d) ** 0.25,
        certified_upper=value,
        seed=seed,
        eig_tol=eig_tol,
        max_iter=max_iter,
        diagnostics={
            "lambda": lam_s * s**q,
            "max_eig_residual": 0.0 if w is None else w.residual / max(w.lam, np.finfo(float).tiny),
            "wall_ms": {"total": 1000.0 * (time.perf_counter() - t0)},
        },
    )


def flatten_check(X, q, max_dim=MAX_FLATTEN_DIM) -> float:
    """Top eigenvalue of the explicit flattening ``mean_i y_i y_i^T``, ``y_i = x_i^{(q/2)}``.

    Dense reference for tiny instances; uses LAPACK/ARPACK rather than
    power iteration so it stays independent of ``baseline_certificate``.
    """
    X = as_data_matrix(X)
    q = check_even_q(q)
    n, d = X.shape
    dim = d ** (q // 2)
    if dim > max_dim:
        raise CapacityError(f"flattening dimension {dim} exceeds {max_dim}")
    Y = X
    for _ in range(q // 2 - 1):
        Y = (Y[:, :, None] * X[:, None, :]).reshape(n, -1)
    F = Y.T @ Y / n
    F = 0.5 * (F + F.T)
    if dim <= 64:
        return float(np.linalg.eigvalsh(F)[-1])
    from scipy.sparse.linalg import eigsh

    v0 = np.ones(dim) / math.sqrt(dim)
    return float(eigsh(F, k=1, which="LA", v0=v0, tol=0)[0][0])


def guth_factor(n: int, q: int) -> float:
    return float(n) ** ((q - 2) / (2 * q * (q - 1)))


def guth_certificate(X, q, eig_tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, seed=0) -> CertificateReport:
    """Comparison certificate over normalized rows plus the top right singular vector."""
    X = as_data_matrix(X)
    q = check_even_q(q)
    n, d = X.shape
    t0 = time.perf_counter()
    norms = row_norms(X)
    s = float(norms.max())
    nz = np.flatnonzero(norms > 0)
    Xs = X / s if s > 0 else X
    _, right, _, w = top_singular_pair(Xs, tol=eig_tol, max_iter=max_iter, seed=seed)
    vectors = np.concatenate([X[nz] / norms[nz, None], right[None, :]], axis=0)
    tags = [("row", int(i)) for i in nz] + [("topsv", None)]
    values = evaluate_directions(Xs, vectors, q) * (s if s > 0 else 1.0)
    k = int(np.argmax(values))
    B = float(values[k])
    factor = guth_factor(n, q)
    return CertificateReport(
        method="guth",
        q=q,
        n=n,
        d=d,
        factor=factor,
        B=B,
        certified_upper=factor * B,
        best_direction=vectors[k].copy(),
        best_provenance=provenance(tags[k]),
        seed=seed,
        eig_tol=eig_tol,
        max_iter=max_iter,
        diagnostics={
            "topsv_value": float(values[-1]),
            "max_row_value": float(values[:-1].max()) if nz.size else 0.0,
            "top_right_singular_vector": right,
            "max_eig_residual": w.residual / max(w.lam, np.finfo(float).tiny),
            "wall_ms": {"total": 1000.0 * (time.perf_counter() - t0)},
        },
    )


def gamma_p(p) -> float:
    if not p >= 1:
        raise InvalidArgumentError(f"p must be >= 1, got {p!r}")
    return 1.0 / p - 0.5 if p <= 2 else 0.5 - 1.0 / p


@dataclass(frozen=True)
class PToQReport:
    p: float
    q: int
    n: int
    d: int
    gamma_p: float
    factor: float
    lower: float
    certified_upper: float
    best_direction: np.ndarray
    best_provenance: str
    proxy: CertificateReport

    def to_dict(self) -> dict:
        out = self.proxy.to_dict()
        out.update(
            method="proxy-pq",
            p=self.p,
            gamma_p=self.gamma_p,
            factor=self.factor,
            B=self.lower,
            certified_upper=self.certified_upper,
            best_direction={
                "provenance": self.best_provenance,
                "coords": [float(c) for c in self.best_direction],
            },
        )
        return out


def p_to_q_certificate(X, p, q, eig_tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, seed=0, threads=None):
    """``p -> q`` certificate in standard (unnormalized) norms, reusing the proxy list.

    ``lower = max_{v in L} ||Xv||_q / ||v||_p`` and
    ``certified_upper = d^(gamma_p + 1/4 - 1/(2q)) * lower``.
    """
    q = check_even_q(q)
    if not 1 <= p <= q:
        raise InvalidArgumentError(f"need 1 <= p <= q, got p={p!r}, q={q}")
    X = as_data_matrix(X)
    n, d = X.shape
    plist, report = proxy_certificate(X, q, eig_tol=eig_tol, max_iter=max_iter, seed=seed, threads=threads)
    pnorms = np.linalg.norm(plist.vectors, ord=p, axis=1)
    ratios = n ** (1.0 / q) * plist.values / pnorms
    k = int(np.argmax(ratios))
    g = gamma_p(p)
    factor = float(d) ** (g + 0.25 - 1.0 / (2 * q))
    lower = float(ratios[k])
    return PToQReport(
        p=float(p),
        q=q,
        n=n,
        d=d,
        gamma_p=g,
        factor=factor,
        lower=lower,
        certified_upper=factor * lower,
        best_direction=plist.vectors[k] / pnorms[k],
        best_provenance=provenance(plist.tags[k]),
        proxy=report,
    )
