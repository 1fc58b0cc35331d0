"""Scaling experiments and the adversarial-instance reproduction."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .certify import baseline_certificate, guth_certificate, proxy_certificate
from .core import CapacityError, InvalidArgumentError
from .generators import gen_appendixA_spike, gen_gaussian
from .oracle import oracle_lower_bound

log = logging.getLogger(__name__)

METHODS = ("proxy", "baseline", "oracle")
DEFAULT_BUDGET = 2e10
# relative slack for ">= d" checks whose exact value is d
EXACT_SLACK = 1e-12


def fit_slope(ds, values):
    """Least-squares slope and residuals of ``log value`` against ``log d``."""
    x = np.log(np.asarray(ds, dtype=np.float64))
    y = np.log(np.asarray(values, dtype=np.float64))
    if np.unique(x).size < 3:
        raise InvalidArgumentError("slope fit needs at least 3 distinct d values")
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0]), y - A @ coef


def parse_n_rule(rule: str):
    rule = rule.strip()
    if rule == "4d2":
        return lambda d: 4 * d * d
    if rule.startswith("fixed:"):
        n = int(rule.split(":", 1)[1])
        if n < 1:
            raise InvalidArgumentError(f"bad n-rule {rule!r}")
        return lambda d: n
    raise InvalidArgumentError(f"unknown n-rule {rule!r}; use '4d2' or 'fixed:<n>'")


@dataclass
class BenchResult:
    q: int
    rows: list = field(default_factory=list)
    slopes: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    medians: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "rows": self.rows,
            "slopes": self.slopes,
            "residuals": {k: [float(r) for r in v] for k, v in self.residuals.items()},
            "medians": {k: {str(d): v for d, v in m.items()} for k, m in self.medians.items()},
            "skipped": self.skipped,
        }

    def csv_lines(self):
        yield "d,n,seed,method,value,wall_ms"
        for r in self.rows:
            yield f"{r['d']},{r['n']},{r['seed']},{r['method']},{r['value']!r},{r['wall_ms']:.3f}"


def _run_method(method, X, q, seed, restarts):
    if method == "proxy":
        return proxy_certificate(X, q, seed=seed)[1].certified_upper
    if method == "baseline":
        return baseline_certificate(X, q, seed=seed).certified_upper
    if method == "oracle":
        return oracle_lower_bound(X, q, restarts=restarts, seed=seed).value
    raise InvalidArgumentError(f"unknown method {method!r}")


def bench_scaling(
    q=4,
    dims=(8, 16, 24, 32),
    n_rule="4d2",
    seeds=3,
    methods=METHODS,
    budget=DEFAULT_BUDGET,
    restarts=64,
    synthetic=None,
) -> BenchResult:
    """Gaussian scaling run with log-log slope fits per method.

    For each ``d`` and seed a ``N(0, I)`` instance with ``n = n_rule(d)``
    rows is certified by every method; slopes are fitted to the median
    over seeds.  ``synthetic`` (a callable ``(method, d) -> value``) bypasses
    instance generation, for checking the fit itself.
    """
    n_of = parse_n_rule(n_rule) if isinstance(n_rule, str) else n_rule
    if len(set(dims)) < 3:
        raise InvalidArgumentError("need at least 3 distinct dims")
    result = BenchResult(q=q)
    kept = []
    for d in dims:
        n = n_of(d)
        if synthetic is None and float(n) ** 2 * d**2 > budget:
            log.warning("skipping d=%d: n^2 d^2 = %.3g exceeds budget %.3g", d, float(n) ** 2 * d**2, budget)
            result.skipped.append(d)
            continue
        kept.append(d)
        for seed in range(seeds):
            X = None if synthetic is not None else gen_gaussian(n, d, seed)
            for method in methods:
                t0 = time.perf_counter()
                value = synthetic(method, d) if synthetic is not None else _run_method(method, X, q, seed, restarts)
                wall = 1000.0 * (time.perf_counter() - t0)
                result.rows.append(
                    {"d": d, "n": n, "seed": seed, "method": method, "value": float(value), "wall_ms": wall}
                )
    if len(kept) < 3:
        raise CapacityError(f"only {len(kept)} dims fit in the budget; a slope needs 3")
    for method in methods:
        med = {}
        for d in kept:
            vals = [r["value"] for r in result.rows if r["d"] == d and r["method"] == method]
            med[d] = float(np.median(vals))
        slope, resid = fit_slope(list(med), list(med.values()))
        result.slopes[method] = slope
        result.residuals[method] = resid
        result.medians[method] = med
    return result


@dataclass
class LimitationSeed:
    seed: int
    n: int
    topsv_fourth: float
    max_row_fourth: float
    e1_fourth: float
    topsv_dist_e2: float
    guth_B4: float
    proxy_B4: float
    checks: dict

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def limitation_checks(row: LimitationSeed, d: int, const: float = 10.0, dist_tol: float = 0.25) -> dict:
    floor = d * (1 - EXACT_SLACK)
    return {
        "item1_topsv_fourth_le_const": row.topsv_fourth <= const,
        "item2_rows_fourth_le_const": row.max_row_fourth <= const,
        "item3_e1_fourth_ge_d": row.e1_fourth >= floor,
        "topsv_near_e2": row.topsv_dist_e2 <= dist_tol,
        "proxy_B4_ge_d": row.proxy_B4 >= floor,
        "guth_B4_le_const": row.guth_B4 <= const,
    }


def limitation(d=8, C=50.0, seeds=3, q=4, const=10.0, dist_tol=0.25, run_proxy=True):
    """Check the adversarial construction against the rows + top-singular-vector list.

    Returns ``(per_seed, verdict)`` where ``verdict[check]`` is the majority
    outcome over seeds and ``verdict["pass"]`` requires every check.
    """
    if d < 3:
        raise InvalidArgumentError(f"limitation needs d >= 3, got {d}")
    per_seed = []
    for seed in range(seeds):
        X = gen_appendixA_spike(d, C, seed)
        g = guth_certificate(X, q, seed=seed)
        u = g.diagnostics["top_right_singular_vector"]
        e2 = np.zeros(d)
        e2[1] = 1.0
        proxy_B = proxy_certificate(X, q, seed=seed)[1].B if run_proxy else math.nan
        row = LimitationSeed(
            seed=seed,
            n=X.shape[0],
            topsv_fourth=g.diagnostics["topsv_value"] ** q,
            max_row_fourth=g.diagnostics["max_row_value"] ** q,
            e1_fourth=float(np.mean(X[:, 0] ** q)),
            topsv_dist_e2=float(min(np.linalg.norm(u - e2), np.linalg.norm(u + e2))),
            guth_B4=g.B**q,
            proxy_B4=proxy_B**q,
            checks={},
        )
        row.checks = limitation_checks(row, d, const, dist_tol)
        per_seed.append(row)
        log.info("limitation seed %d: %s", seed, row.checks)
    names = per_seed[0].checks
    verdict = {k: sum(r.checks[k] for r in per_seed) * 2 > len(per_seed) for k in names}
    verdict["pass"] = all(verdict.values())
    return per_seed, verdict
