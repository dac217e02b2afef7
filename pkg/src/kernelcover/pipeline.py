"""Size-reduced cover construction: sample, embed, cover in the small space, pull back."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .covering import DEFAULT_MAX_POINTS, Cover, far_point, naive_cover
from .kernels import KernelSpec, critical_radius, lipschitz
from .sampling import SampleSizeConfig, cover_sample_size, draw_sample
from .signatures import PointSet, _as_pointset, signature_matrix
from .terminal_jl import EmbeddingInfeasible, SolverConfig, TerminalEmbedding, build_embedding, embed_many

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    sample: SampleSizeConfig = field(default_factory=SampleSizeConfig)
    C_jl: float = 8.0
    solver: SolverConfig = field(default_factory=SolverConfig)
    retries: int = 3
    max_points: int = DEFAULT_MAX_POINTS
    threads: int = 1


def coupled_eps_prime(spec: KernelSpec, eps: float) -> float:
    """Distortion for the embedding step: ``eps / (16 L r(eps/16))``."""
    return eps / (16.0 * lipschitz(spec) * critical_radius(spec, eps / 16.0))


def pull_back(spec: KernelSpec, S: PointSet, emb: TerminalEmbedding, Q: Cover, eps: float, *,
              X: PointSet | None = None, max_points: int = DEFAULT_MAX_POINTS, threads: int = 1) -> Cover:
    """Turn a cover ``Q`` of the embedded anchors into a cover in the original space.

    Walks a naive ``eps/8``-cover ``Q_S`` of ``S`` in construction order. Each
    surviving point is matched to a remaining ``q`` in ``Q`` within ``eps/8``
    (in d_delta over the embedded anchors); the point is kept, ``q`` is retired
    and every later point covered by the same ``q`` is dropped. A point with
    no remaining match is kept anyway and counted in ``meta['warnings']``.
    The far point is taken relative to ``X`` (default ``S``).
    """
    S = _as_pointset(S)
    X = S if X is None else _as_pointset(X)
    level = eps / 8.0
    QS = naive_cover(spec, S, level, max_points=max_points, threads=threads)
    P = QS.all_points()
    anchors = PointSet(emb.anchor_images)
    WP = signature_matrix(spec, anchors, embed_many(emb, P))
    WQ = signature_matrix(spec, anchors, Q.all_points())
    k = anchors.n

    alive_p = np.ones(len(P), dtype=bool)
    alive_q = np.ones(len(WQ), dtype=bool)
    kept, matched, warnings = [], [], 0
    for i in range(len(P)):
        if not alive_p[i]:
            continue
        alive_p[i] = False
        kept.append(i)
        cand = np.flatnonzero(alive_q)
        if len(cand) == 0:
            warnings += 1
            continue
        dist = np.abs(WQ[cand] - WP[i]).sum(axis=1) / k
        j = int(np.argmin(dist))
        if dist[j] > level:
            warnings += 1
            continue
        q = cand[j]
        assert alive_q[q], "each q may be matched once"
        alive_q[q] = False
        matched.append(int(q))
        later = np.flatnonzero(alive_p)
        if len(later):
            covered = np.abs(WP[later] - WQ[q]).sum(axis=1) / k <= level
            alive_p[later[covered]] = False

    if warnings:
        log.warning("pull-back kept %d points with no remaining match", warnings)
    meta = {"epsilon": eps, "kernel": spec, "ambient_dim": S.d, "construction": "pull_back",
            "QS_size": len(P), "Q_size": len(WQ), "Q_prime_size": len(kept) + 1,
            "warnings": warnings, "matched": matched}
    return Cover(P[kept], far_point(spec, X, eps), meta)


def build_cover(spec: KernelSpec, X: PointSet, eps: float, cfg: PipelineConfig | None = None,
                seed=None) -> Cover:
    """Cover of ``X`` whose size does not depend on ``n`` or ``d``, given enough compute.

    Samples ``S`` at ``eps/4``, embeds it with distortion ``eps/(16 L r(eps/16))``,
    builds a naive ``eps/8``-cover of the embedded anchors and pulls it back.
    On solver failure the projection is redrawn up to ``cfg.retries`` times.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    X = _as_pointset(X)
    cfg = cfg or PipelineConfig()
    t0 = time.perf_counter()
    seeds = np.random.SeedSequence(seed).spawn(cfg.retries + 2)

    size = cover_sample_size(spec, eps / 4.0, cfg.sample, X.d)
    S = draw_sample(X, size, np.random.default_rng(seeds[0]))
    eps_prime = coupled_eps_prime(spec, eps)

    for attempt in range(cfg.retries + 1):
        emb = build_embedding(S, eps_prime, np.random.default_rng(seeds[1 + attempt]),
                              C_jl=cfg.C_jl, solver_cfg=cfg.solver)
        Q = naive_cover(spec, PointSet(emb.anchor_images), eps / 8.0,
                        max_points=cfg.max_points, threads=cfg.threads)
        try:
            out = pull_back(spec, S, emb, Q, eps, X=X, max_points=cfg.max_points, threads=cfg.threads)
        except EmbeddingInfeasible:
            if attempt == cfg.retries:
                raise
            log.info("embedding infeasible, redrawing projection (attempt %d)", attempt + 1)
            continue
        break

    out.meta.update(
        seed=seed, sample_size=S.n, n=X.n, m=emb.m, eps_prime=eps_prime, redraws=attempt,
        construction="pipeline", wall_time=time.perf_counter() - t0,
    )
    return out
