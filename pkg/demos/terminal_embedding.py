"""Terminal embedding: exact distances to the nearest anchor, bounded distortion to the rest."""
import numpy as np

from kernelcover.oracle import verify_terminal
from kernelcover.signatures import PointSet
from kernelcover.terminal_jl import embed_with_retries

rng = np.random.default_rng(4)
for n, d in [(100, 50), (100, 400)]:
    S = PointSet(rng.normal(size=(n, d)))
    Q = rng.normal(scale=1.2, size=(300, d))
    emb, img, redraws = embed_with_retries(S, Q, 0.5, seed=0)
    rep = verify_terminal(emb, Q, 0.5, images=img)
    nn = np.argmin(np.linalg.norm(Q[:, None] - S.points[None], axis=2), axis=1)
    gap = np.abs(np.linalg.norm(img - emb.anchor_images[nn], axis=1) - np.linalg.norm(Q - S.points[nn], axis=1))
    print(f"n={n} d={d} -> m={emb.m}  nearest-anchor gap {gap.max():.1e}  "
          f"ratio range [{rep.details['min_ratio']:.4f}, {rep.details['max_ratio']:.4f}]  redraws {redraws}")
