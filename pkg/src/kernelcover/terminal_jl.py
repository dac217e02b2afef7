"""Terminal dimensionality reduction.

Anchors are mapped linearly, ``s -> (P s, 0)``. An outer point ``q`` is placed
next to the image of its nearest anchor ``x`` by solving a small convex program
for the displacement ``z`` in the projected space, then appending the leftover
length as an extra coordinate, so that ``||f(q) - f(x)|| = ||q - x||`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .signatures import PointSet, _as_pointset


class EmbeddingInfeasible(RuntimeError):
    def __init__(self, violation: float, iters: int):
        self.violation = violation
        self.iters = iters
        super().__init__(f"no feasible displacement after {iters} sweeps (worst violation {violation:.3g})")


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 5000
    feas_tol: float = 1e-6
    # stop once a full sweep moves z by less than this (relative to ||q - x_nn||)
    step_tol: float = 1e-12


def jl_dim(n: int, eps_prime: float, d: int, C_jl: float = 8.0) -> int:
    if n < 2:
        raise ValueError("need at least two anchors")
    if not (0.0 < eps_prime < 1.0):
        raise ValueError(f"eps_prime must lie in (0, 1), got {eps_prime}")
    return min(d, math.ceil(C_jl * math.log(n) / eps_prime**2))


def random_projection(m: int, d: int, rng) -> np.ndarray:
    """An ``m x d`` map onto a uniformly random ``m``-dimensional subspace, scaled by ``sqrt(d/m)``.

    Rows are the Gram-Schmidt orthonormalisation of i.i.d. normal rows, so
    ``m == d`` yields a random rotation.
    """
    G = rng.standard_normal((d, m))
    Q, R = np.linalg.qr(G)
    Q *= np.sign(np.diag(R))  # Haar measure
    return math.sqrt(d / m) * Q.T


@dataclass(frozen=True, eq=False)
class TerminalEmbedding:
    proj: np.ndarray
    anchors: PointSet
    eps_prime: float
    solver_cfg: SolverConfig = field(default_factory=SolverConfig)
    seed: object = None

    def __post_init__(self):
        img = self.anchors.points @ self.proj.T
        img = np.hstack([img, np.zeros((img.shape[0], 1))])
        img.flags.writeable = False
        object.__setattr__(self, "_images", img)
        object.__setattr__(self, "_anchor_rows", {row.tobytes(): i for i, row in enumerate(self.anchors.points)})

    @property
    def m(self) -> int:
        return self.proj.shape[0]

    @property
    def d(self) -> int:
        return self.proj.shape[1]

    @property
    def anchor_images(self) -> np.ndarray:
        """``(|S|, m + 1)`` images ``(P s, 0)`` of the anchors."""
        return self._images

    def anchor_index(self, q) -> int | None:
        return self._anchor_rows.get(np.asarray(q, dtype=float).tobytes())


def build_embedding(S: PointSet, eps_prime: float, seed=None, *, C_jl: float = 8.0,
                    solver_cfg: SolverConfig | None = None) -> TerminalEmbedding:
    S = _as_pointset(S)
    # a single anchor has nothing to preserve; size the map as for two
    m = jl_dim(max(S.n, 2), eps_prime, S.d, C_jl)
    rng = np.random.default_rng(seed)
    proj = random_projection(m, S.d, rng)
    proj.flags.writeable = False
    return TerminalEmbedding(proj, S, eps_prime, solver_cfg or SolverConfig(), seed)


def _project_intersection(c, A, b, w, R, cfg):
    """Closest point to ``c`` in ``{z : ||z|| <= R, |A z - b| <= w}`` by Dykstra's method.

    Returns ``(z, worst relative violation, sweeps)``.
    """
    anorm2 = np.einsum("ij,ij->i", A, A)
    ok = anorm2 > 0
    A, b, w, anorm2 = A[ok], b[ok], w[ok], anorm2[ok]
    scale = np.maximum(w, 1e-300)

    def violation(z):
        slab = np.max((np.abs(A @ z - b) - w) / scale, initial=0.0)
        ball = max(np.linalg.norm(z) - R, 0.0) / R
        return max(slab, ball)

    z = c.copy()
    if violation(z) <= 0.0:
        return z, 0.0, 0
    n = A.shape[0]
    incr = np.zeros((n, z.shape[0]))
    ball_incr = np.zeros_like(z)
    used = np.zeros(n, dtype=bool)
    for sweep in range(1, cfg.max_iters + 1):
        z_start = z.copy()
        y = z + ball_incr
        ny = np.linalg.norm(y)
        z = y if ny <= R else y * (R / ny)
        ball_incr = y - z
        for i in range(n):
            a = A[i]
            if used[i]:
                y = z + incr[i]
            else:
                y = z
            t = a @ y - b[i]
            if t > w[i]:
                z = y - ((t - w[i]) / anorm2[i]) * a
            elif t < -w[i]:
                z = y - ((t + w[i]) / anorm2[i]) * a
            elif not used[i]:
                continue
            else:
                z = y
            incr[i] = y - z
            used[i] = bool(np.any(incr[i]))
        if np.linalg.norm(z - z_start) <= cfg.step_tol * R:
            break
    return z, violation(z), sweep


def embed(emb: TerminalEmbedding, q) -> np.ndarray:
    """Image of ``q`` in ``R^(m+1)``; raises :class:`EmbeddingInfeasible` on solver failure."""
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape[0] != emb.d:
        raise ValueError(f"dimension mismatch: query has {q.shape[0]} coords, embedding expects {emb.d}")
    hit = emb.anchor_index(q)
    if hit is not None:
        return emb.anchor_images[hit].copy()

    X = emb.anchors.points
    diff = X - q
    nn = int(np.argmin(np.einsum("ij,ij->i", diff, diff)))
    x_nn = X[nn]
    v = q - x_nn
    R = float(np.linalg.norm(v))
    U = X - x_nn
    A = U @ emb.proj.T
    b = U @ v
    w = emb.eps_prime * R * np.linalg.norm(U, axis=1)

    z, viol, iters = _project_intersection(emb.proj @ v, A, b, w, R, emb.solver_cfg)
    if viol > emb.solver_cfg.feas_tol:
        raise EmbeddingInfeasible(viol, iters)
    nz = float(np.linalg.norm(z))
    if nz > R:
        z *= R / nz
        nz = R
    head = emb.anchor_images[nn, :-1] + z
    return np.append(head, math.sqrt(max(R * R - nz * nz, 0.0)))


def embed_many(emb: TerminalEmbedding, queries) -> np.ndarray:
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    return np.array([embed(emb, q) for q in Q]).reshape(Q.shape[0], emb.m + 1)


def embed_with_retries(S: PointSet, queries, eps_prime: float, seed=None, *, retries: int = 3,
                       C_jl: float = 8.0, solver_cfg: SolverConfig | None = None):
    """Build an embedding and embed ``queries``, redrawing the projection on infeasibility.

    Returns ``(embedding, images, redraws)``.
    """
    seeds = np.random.SeedSequence(seed).spawn(retries + 1)
    for attempt, ss in enumerate(seeds):
        emb = build_embedding(S, eps_prime, np.random.default_rng(ss), C_jl=C_jl, solver_cfg=solver_cfg)
        try:
            return emb, embed_many(emb, queries), attempt
        except EmbeddingInfeasible:
            if attempt == retries:
                raise
