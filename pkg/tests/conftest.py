import itertools
import math

import numpy as np
import pytest

from hypercert.generators import gen_gaussian, gen_planted_spike, gen_rank_one

SUITE_KINDS = ("gaussian", "spike", "rank_one")
SUITE_DIMS = (2, 4, 8, 16)
SUITE_NS = (8, 64, 512)
SUITE_QS = (2, 4, 6)


def make_instance(kind, n, d, seed):
    if kind == "gaussian":
        return gen_gaussian(n, d, seed)
    if kind == "spike":
        return gen_planted_spike(n, d, rho=0.25, spike_mag=math.sqrt(d), seed=seed)
    return gen_rank_one(n, d, c=0.5 + seed, direction_seed=seed)


def instance_suite(count=200):
    """``count`` instances cycling kinds x d x n x q, the seed bumping per pass."""
    combos = list(itertools.product(SUITE_KINDS, SUITE_DIMS, SUITE_NS, SUITE_QS))
    out = []
    for k in range(count):
        kind, d, n, q = combos[k % len(combos)]
        seed = 1000 + k // len(combos)
        out.append((kind, n, d, q, seed))
    return out


def rel_close(a, b, rtol):
    return abs(a - b) <= rtol * max(abs(a), abs(b))


@pytest.fixture
def identity2():
    return np.eye(2)
