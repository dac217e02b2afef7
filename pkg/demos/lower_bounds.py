"""Level-set witness grids, packings and the counting bound."""
import math

from kernelcover import KernelSpec
from kernelcover.lowerbound import (
    SphereSystem, combinatorial_bound, corner_distances, hamming_count,
    packing_certificate, sphere_intersection, witness_grid,
)

print(sphere_intersection(SphereSystem([1.0, 1.0])))
print(sphere_intersection(SphereSystem([1.0, 1.0, 1.0])))

for eps, d in [(0.01, 2), (0.005, 2), (0.004, 3)]:
    g = witness_grid(eps, d)
    cert = packing_certificate(KernelSpec("gaussian"), g)
    D = corner_distances(g)
    print(f"eps={eps} d={d}: i in {g.indices[0]}..{g.indices[-1]}, {len(g.corners)} corners, "
          f"{g.annulus_cells} cells, packing {cert.size}, min nonzero gap {D[D > 0].min():.4f}")

for eps, d in [(0.05, 10), (0.1, 20), (0.1, 40)]:
    M, N = combinatorial_bound(eps, d), hamming_count(d, eps)
    print(f"eps={eps} d={d}: log2 M={math.log2(M):.3f}  N={N}  2^d/N={2**d / N:.4g}")
