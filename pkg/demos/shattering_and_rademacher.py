"""Which labelings of 1-D points a kernel range can pick out, and how the sample complexity decays."""
import numpy as np

from kernelcover import KernelSpec, PointSet
from kernelcover.oracle import all_labelings, empirical_rademacher, shatter_search_1d

spec = KernelSpec("gaussian")
pts = np.array([-51.0, -50.0, 50.0, 51.0])
hits = [shatter_search_1d(spec, pts, lab) for lab in all_labelings(4)]
print(f"{sum(h is not None for h in hits)}/16 labelings of {pts} realized")
print("alternating on five points:",
      shatter_search_1d(spec, [-51.0, -50.0, 0.0, 50.0, 51.0], [1, 0, 1, 0, 1]))

rng = np.random.default_rng(6)
g = np.linspace(-2, 2, 9)
grid = np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
pairs = grid[rng.integers(0, len(grid), (400, 2))]
for m in [25, 100, 400]:
    S = PointSet(rng.uniform(-1, 1, (m, 2)))
    print(f"m={m:4d}: estimate {empirical_rademacher(spec, S, 2000, pairs, seed=m):.4f}  "
          f"2/sqrt(m)={2 / np.sqrt(m):.4f}")
