"""Sample, embed, cover the embedded sample and pull the cover back; then see where it stops scaling."""
import numpy as np

from kernelcover import KernelSpec, PointSet
from kernelcover.covering import CoverTooLargeError
from kernelcover.oracle import verify_cover
from kernelcover.pipeline import PipelineConfig, build_cover
from kernelcover.sampling import SampleSizeConfig

spec = KernelSpec("gaussian")
rng = np.random.default_rng(5)

X = PointSet(rng.uniform(0, 2, (500, 1)))
cover = build_cover(spec, X, 0.4, PipelineConfig(SampleSizeConfig("vc")), seed=1)
rep = verify_cover(spec, X, cover, 0.4, trials=5000, seed=1)
meta = cover.meta
print(f"d=1: |S|={meta['sample_size']} |Q|={meta['Q_size']} |Q'|={len(cover)} "
      f"warnings={meta['warnings']} error={rep.max_error:.4f} ({meta['wall_time']:.2f}s)")

# the embedded eps/8 lattice grows like (1/eps)^(m+1); in 30 dimensions it is out of reach
X = PointSet(rng.uniform(0, 1, (200, 30)))
try:
    build_cover(spec, X, 0.4, PipelineConfig(SampleSizeConfig("pd")), seed=7)
except CoverTooLargeError as e:
    print(f"d=30: refused, ~{e.estimate:.1e} lattice points in dimension {e.dim}")
