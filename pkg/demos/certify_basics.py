"""Certify the 2->4 expectation norm of a few small matrices.

For each matrix we print the best list direction (a lower bound), the
certified upper bound, and what a local-ascent oracle finds in between.
"""

import numpy as np

from hypercert import baseline_certificate, decide, oracle_lower_bound, proxy_certificate
from hypercert.generators import gen_gaussian, gen_planted_spike

q = 4
instances = {
    "identity I_2": np.eye(2),
    "gaussian n=256 d=8": gen_gaussian(256, 8, seed=0),
    "planted spike d=9": gen_planted_spike(90, 9, rho=1 / 9, spike_mag=3.0, seed=1),
}

for name, X in instances.items():
    L, report = proxy_certificate(X, q)
    oracle = oracle_lower_bound(X, q, restarts=32, warm_starts=L, warm_top=16)
    base = baseline_certificate(X, q)
    print(f"\n{name}")
    print(f"  list lower bound B   {report.B:.6f}  (from {report.best_provenance})")
    print(f"  ascent oracle        {oracle.value:.6f}")
    print(f"  certified upper      {report.certified_upper:.6f}  (factor {report.factor:.4f})")
    print(f"  flattening baseline  {base.certified_upper:.6f}")

    # a promise-problem decision at threshold alpha = 1
    verdict = decide(report, alpha=1.0)
    print(f"  decision at alpha=1  {verdict.decision}")
