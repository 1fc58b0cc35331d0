"""Seeded instance generators.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64 bit
generator, ziggurat normals), drawn in row-major order in a single stream,
so a given spec always yields the same matrix bit for bit.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import InvalidArgumentError
from .spectral import random_unit

KINDS = ("gaussian", "appendixA_spike", "rank_one", "identity", "planted_spike")


def gen_gaussian(n: int, d: int, seed: int) -> np.ndarray:
    """Rows i.i.d. ``N(0, I_d)``."""
    _check_shape(n, d)
    return np.random.default_rng(seed).standard_normal((n, d))


def appendix_a_rows(d: int, C: float = 50.0) -> int:
    """Row count ``n = C d^3`` rounded to a multiple of ``d``."""
    return d * max(1, int(round(C * d * d)))


def gen_appendixA_spike(d: int, C: float = 50.0, seed: int = 0) -> np.ndarray:
    """Spiked construction that defeats the rows + top-singular-vector list.

    With ``r = n/d``, ``Z_i ~ N(0, I_{d-1} + e_1 e_1^T)`` and random signs
    ``s_i``, the first ``r`` rows are ``(s_i sqrt(d), d^(1/4) Z_i)`` and the
    rest ``(0, Z_i)``.  Then ``mean <x_i, e_1>^4 = d`` exactly, while the
    empirical covariance is close to ``I + e_2 e_2^T``.
    """
    if d < 3:
        raise InvalidArgumentError(f"appendixA_spike needs d >= 3, got {d}")
    if C < 1:
        raise InvalidArgumentError(f"C must be >= 1, got {C}")
    n = appendix_a_rows(d, C)
    r = n // d
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, d - 1))
    Z[:, 0] *= math.sqrt(2.0)
    signs = rng.choice(np.array([-1.0, 1.0]), size=r)
    X = np.zeros((n, d))
    X[:, 1:] = Z
    X[:r, 0] = signs * math.sqrt(d)
    X[:r, 1:] *= d**0.25
    return X


def gen_rank_one(n: int, d: int, c: float = 1.0, direction_seed: int = 0) -> np.ndarray:
    """Every row equals ``c u`` for a seeded random unit ``u``; the 2->q norm is ``c``."""
    _check_shape(n, d)
    if c < 0:
        raise InvalidArgumentError(f"c must be >= 0, got {c}")
    u = random_unit(d, np.random.default_rng(direction_seed))
    return np.tile(c * u, (n, 1))


def gen_planted_spike(n: int, d: int, rho: float, spike_mag: float, seed: int = 0) -> np.ndarray:
    """``round(rho n)`` leading rows equal ``spike_mag e_1``; the rest are ``N(0, I_d)``."""
    _check_shape(n, d)
    if not 0 < rho <= 1:
        raise InvalidArgumentError(f"rho must lie in (0, 1], got {rho}")
    if not spike_mag > 0:
        raise InvalidArgumentError(f"spike magnitude must be positive, got {spike_mag}")
    m = int(round(rho * n))
    X = np.random.default_rng(seed).standard_normal((n, d))
    X[:m] = 0.0
    X[:m, 0] = spike_mag
    return X


def gen_identity(n: int, d: int) -> np.ndarray:
    """Row ``i`` is ``e_{i mod d}``; ``n = d`` gives ``I_d``."""
    _check_shape(n, d)
    X = np.zeros((n, d))
    X[np.arange(n), np.arange(n) % d] = 1.0
    return X


def _check_shape(n, d):
    if int(n) < 1 or int(d) < 1:
        raise InvalidArgumentError(f"n and d must be positive, got n={n}, d={d}")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int | None = None
    d: int = 2
    q_hint: int = 4
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "appendixA_spike":
            if self.d < 3:
                raise InvalidArgumentError("appendixA_spike needs d >= 3")
            n = appendix_a_rows(self.d, self.params.get("C", 50.0))
            if self.n is not None and self.n != n:
                raise InvalidArgumentError(f"appendixA_spike with this d and C has n = {n}, got {self.n}")
            object.__setattr__(self, "n", n)
        elif self.n is None:
            raise InvalidArgumentError(f"kind {self.kind!r} needs n")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSpec":
        return cls(**json.loads(text))


def generate(spec: GeneratorSpec) -> np.ndarray:
    p = spec.params
    if spec.kind == "gaussian":
        return gen_gaussian(spec.n, spec.d, spec.seed)
    if spec.kind == "appendixA_spike":
        return gen_appendixA_spike(spec.d, p.get("C", 50.0), spec.seed)
    if spec.kind == "rank_one":
        return gen_rank_one(spec.n, spec.d, p.get("c", 1.0), spec.seed)
    if spec.kind == "identity":
        return gen_identity(spec.n, spec.d)
    return gen_planted_spike(
        spec.n,
        spec.d,
        p.get("rho", 1.0 / spec.d),
        p.get("spike_mag", math.sqrt(spec.d)),
        spec.seed,
    )
