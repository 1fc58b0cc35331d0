"""How the three estimates grow with dimension on Gaussian data.

With n = 4 d^2 rows, the true 2->4 norm stays bounded, the flattening
baseline grows roughly like d^(1/4), and the list certificate grows more
slowly.  A reduced run (one seed, small dims) finishes in well under a
minute; pass ``--full`` for the four-dimension, three-seed version.
"""

import sys

from hypercert.bench import bench_scaling

full = "--full" in sys.argv
dims = (8, 16, 24, 32) if full else (4, 6, 8, 10)
res = bench_scaling(q=4, dims=dims, n_rule="4d2", seeds=3 if full else 1, restarts=64 if full else 16)

print("median value per dimension")
print("   d  " + "  ".join(f"{m:>10}" for m in res.medians))
for d in dims:
    print(f"{d:4d}  " + "  ".join(f"{res.medians[m][d]:10.4f}" for m in res.medians))

print("\nlog-log slopes")
for method, slope in res.slopes.items():
    print(f"  {method:9s} {slope:+.4f}")
