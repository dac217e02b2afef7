"""Lattice covers of a small point set and a Monte Carlo check of the covering error."""
import numpy as np

from kernelcover import KernelSpec, PointSet, naive_cover, verify_cover

rng = np.random.default_rng(0)
X = PointSet(rng.uniform(0, 1, (50, 2)))

for family in ["gaussian", "epanechnikov", "triangle"]:
    spec = KernelSpec(family, sigma=1.0)
    for eps in [0.4, 0.2, 0.1]:
        cover = naive_cover(spec, X, eps)
        rep = verify_cover(spec, X, cover, eps, trials=5000, seed=1)
        print(f"{family:13s} eps={eps:.2f}  |Q|={len(cover):6d}  "
              f"spacing={cover.meta['lattice_spacing']:.4f}  max error={rep.max_error:.4f}")

# a single query is far from enough: the witness lands inside a critical ball
spec = KernelSpec("gaussian")
rep = verify_cover(spec, X, X.points[:1], 0.1, trials=2000, seed=2)
print("one query:", round(rep.max_error, 3), "at", np.round(rep.worst_witness, 3))
