"""Random cover-samples: sample sizes, the pair-error oracle and the KDE implication."""
import numpy as np

from kernelcover import KernelSpec, PointSet, SampleSizeConfig, cover_sample_size, draw_sample
from kernelcover.oracle import verify_cover, verify_cover_sample, verify_kde_sample

spec = KernelSpec("gaussian")
rng = np.random.default_rng(3)
X = PointSet(rng.normal(size=(2000, 10)))

for mode, kw in [("vc", {}), ("pd", {}), ("pd", {"C_pd": 1.0})]:
    cfg = SampleSizeConfig(mode, delta=0.1, **kw)
    print(f"{mode:3s} {kw}: size at eps=0.2 ->", cover_sample_size(spec, 0.2, cfg, X.d))

size = cover_sample_size(spec, 0.2, SampleSizeConfig("pd", C_pd=1.0), X.d)
errs, kde = [], []
for t in range(5):
    S = draw_sample(X, size, seed=t)
    errs.append(verify_cover_sample(spec, X, S, 0.2, 5000, seed=t).max_error)
    kde.append(verify_kde_sample(spec, X, S, 0.2, trials=5000, seed=t).max_error)
print("pair errors:", np.round(errs, 4))
print("kde errors: ", np.round(kde, 4))

# all mass on one point: a perfect cover-sample that is not a cover
z = np.array([[0.5, 0.5]])
Xz = PointSet(np.repeat(z, 30, axis=0))
print("sample error", verify_cover_sample(spec, Xz, PointSet(z), 0.05, 2000).max_error,
      "| cover error", round(verify_cover(spec, Xz, z, 0.05, 2000).max_error, 3))
