"""Brute-force Monte Carlo checks for covers, samples, embeddings and shattering.

The definitions quantify over every query in ``R^d``; these checks sample
queries instead, biased towards the critical balls of the ground set where
covering errors can actually occur. A passing report is evidence, not proof.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from .covering import Cover
from .kernels import KernelSpec, critical_radius
from .signatures import PointSet, _as_pointset, kde_many, min_ddelta, signature_matrix

IN_BALL_FRACTION = 0.8
# outer shell for the remaining queries spans (r, SHELL_FACTOR * r) around a data point
SHELL_FACTOR = 3.0


@dataclass
class VerificationReport:
    max_error: float
    worst_witness: list
    trials: int
    passed: bool
    seed: object
    threshold: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _report(errors, witnesses, threshold, seed, **details):
    i = int(np.argmax(errors)) if len(errors) else 0
    max_err = float(errors[i]) if len(errors) else 0.0
    wit = np.asarray(witnesses[i]).tolist() if len(errors) else []
    return VerificationReport(max_err, wit, len(errors), bool(max_err <= threshold), seed,
                              float(threshold), details)


def sample_queries(spec: KernelSpec, X: PointSet, eps: float, count: int, rng) -> np.ndarray:
    """Queries around the eps-critical balls of ``X``.

    A fraction ``IN_BALL_FRACTION`` is uniform in the critical ball of a
    uniformly chosen data point; the rest is uniform in the shell between one
    and ``SHELL_FACTOR`` critical radii around a chosen point.
    """
    X = _as_pointset(X)
    r = critical_radius(spec, min(eps, 0.5) if eps >= 1 else eps)
    d = X.d
    n_in = int(round(IN_BALL_FRACTION * count))
    centers = X.points[rng.integers(0, X.n, size=count)]
    dirs = rng.standard_normal((count, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    u = rng.random(count)
    radii = np.empty(count)
    radii[:n_in] = r * u[:n_in] ** (1.0 / d)
    lo, hi = r**d, (SHELL_FACTOR * r) ** d
    radii[n_in:] = (lo + u[n_in:] * (hi - lo)) ** (1.0 / d)
    return centers + dirs * radii[:, None]


def verify_cover(spec: KernelSpec, X: PointSet, Q, eps: float, trials: int = 10_000, seed=0,
                 *, threshold: float | None = None) -> VerificationReport:
    """Largest sampled ``min_q d_delta(R_p, R_q)``.

    ``Q`` is a :class:`Cover` (its far point is included) or a plain array of
    query points used as given.
    """
    X = _as_pointset(X)
    pts = Q.all_points() if isinstance(Q, Cover) else np.atleast_2d(np.asarray(Q, dtype=float))
    if pts.size == 0 or pts.shape[0] == 0:
        raise ValueError("empty cover")
    if pts.shape[1] != X.d:
        raise ValueError(f"cover lives in dimension {pts.shape[1]}, point set in {X.d}")
    rng = np.random.default_rng(seed)
    P = sample_queries(spec, X, eps, trials, rng)
    best, _ = min_ddelta(signature_matrix(spec, X, P), signature_matrix(spec, X, pts))
    return _report(best, P, eps if threshold is None else threshold, seed,
                   cover_size=int(pts.shape[0]), query_model="80% in critical balls, 20% outer shell")


def _distinct(P: PointSet):
    """Distinct rows of ``P`` with weights ``count / n``; duplicates then average exactly."""
    rows, counts = np.unique(P.points, axis=0, return_counts=True)
    return PointSet(rows), counts / P.n


def _pair_errors(spec, X, S, P, Q, chunk=2000):
    (Xu, wx), (Su, ws) = _distinct(X), _distinct(S)
    out = np.empty(P.shape[0])
    for i in range(0, P.shape[0], chunk):
        p, q = P[i : i + chunk], Q[i : i + chunk]
        dx = np.abs(signature_matrix(spec, Xu, p) - signature_matrix(spec, Xu, q)) @ wx
        ds = np.abs(signature_matrix(spec, Su, p) - signature_matrix(spec, Su, q)) @ ws
        out[i : i + chunk] = np.abs(dx - ds)
    return out


def verify_cover_sample(spec: KernelSpec, X: PointSet, S: PointSet, eps: float,
                        pair_trials: int = 10_000, seed=0) -> VerificationReport:
    """Largest sampled ``|d_delta^X(R_p, R_q) - d_delta^S(R_p, R_q)|``."""
    X, S = _as_pointset(X), _as_pointset(S)
    rng = np.random.default_rng(seed)
    P = sample_queries(spec, X, eps, pair_trials, rng)
    Qp = sample_queries(spec, X, eps, pair_trials, rng)
    err = _pair_errors(spec, X, S, P, Qp)
    return _report(err, np.stack([P, Qp], axis=1), eps, seed, sample_size=S.n)


def verify_kde_sample(spec: KernelSpec, X: PointSet, S: PointSet, eps: float, c: float = 0.1,
                      trials: int = 10_000, seed=0) -> VerificationReport:
    """Largest sampled ``|kde_X(q) - kde_S(q)|`` against the threshold ``(1 + c) eps``."""
    X, S = _as_pointset(X), _as_pointset(S)
    rng = np.random.default_rng(seed)
    P = sample_queries(spec, X, eps, trials, rng)
    err = np.abs(kde_many(spec, X, P) - kde_many(spec, S, P))
    return _report(err, P, (1.0 + c) * eps, seed, sample_size=S.n, c=c)


def verify_terminal(emb, queries, eps_prime: float, images=None, slack: float = 1e-6) -> VerificationReport:
    """Distortion ``||f(q) - f(s)|| / ||q - s||`` over outer queries and all anchors.

    Queries that coincide with an anchor are skipped. ``max_error`` is the
    larger of the lower-bound violation ``1 - ratio`` and the upper excess
    ``ratio - (1 + eps_prime)``; the report passes when both stay within ``slack``.
    """
    from .terminal_jl import embed_many

    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    outer = np.array([emb.anchor_index(q) is None for q in Q], dtype=bool)
    if images is None:
        images = embed_many(emb, Q[outer])
    else:
        images = np.asarray(images)[outer]
    Q = Q[outer]
    S = emb.anchors.points
    true = np.linalg.norm(Q[:, None, :] - S[None, :, :], axis=2)
    got = np.linalg.norm(images[:, None, :] - emb.anchor_images[None, :, :], axis=2)
    ratio = got / true
    lower = np.max(1.0 - ratio, axis=1)
    upper = np.max(ratio - (1.0 + eps_prime), axis=1)
    err = np.maximum(lower, upper)
    rep = _report(err, Q, slack, emb.seed if isinstance(emb.seed, int) else None,
                  lower_violation=float(max(lower.max(initial=-np.inf), 0.0)) if len(Q) else 0.0,
                  upper_excess=float(max(upper.max(initial=-np.inf), 0.0)) if len(Q) else 0.0,
                  min_ratio=float(ratio.min()) if len(Q) else 1.0,
                  max_ratio=float(ratio.max()) if len(Q) else 1.0,
                  outer_queries=int(len(Q)))
    rep.max_error = max(rep.max_error, 0.0)
    return rep


def shatter_search_1d(spec: KernelSpec, points, labels, resolution: float = 1e-2):
    """Grid search for ``(p, q, tau)`` with ``|K(p,x) - K(q,x)| >= tau`` exactly on the positives.

    Returns ``None`` when no triple exists on the grid; that is a statement
    about this resolution only.
    """
    x = np.sort(np.asarray(points, dtype=float).reshape(-1))
    labels = np.asarray(labels, dtype=bool).reshape(-1)
    if len(x) > 6:
        raise ValueError("grid search handles at most 6 points")
    if labels.shape != x.shape:
        raise ValueError("one label per point")
    pad = 2.0 * critical_radius(spec, 1e-3)
    lo, hi = x.min() - pad, x.max() + pad
    grid = lo + resolution * np.arange(int(np.floor((hi - lo) / resolution)) + 1)
    if not labels.any():
        return (float(grid[0]), float(grid[0]), 0.5)

    K = spec.profile(np.abs(grid[:, None] - x[None, :]))
    # many grid points see identical (often all-zero) kernel rows
    K, rep = np.unique(K, axis=0, return_index=True)
    order = np.argsort(rep)
    K, rep = K[order], rep[order]
    pos, neg = labels, ~labels
    chunk = max(1, 2_000_000 // (K.shape[0] * len(x)))
    for i in range(0, K.shape[0], chunk):
        D = np.abs(K[i : i + chunk, None, :] - K[None, :, :])
        tau = D[..., pos].min(axis=-1)
        ok = tau > 0
        if neg.any():
            ok &= tau > D[..., neg].max(axis=-1)
        hits = np.argwhere(ok)
        if len(hits):
            a, b = hits[0]
            return (float(grid[rep[i + a]]), float(grid[rep[b]]), float(tau[a, b]))
    return None


def all_labelings(k: int):
    return [np.array(bits, dtype=bool) for bits in product([False, True], repeat=k)]


def empirical_rademacher(spec: KernelSpec, S: PointSet, n_sigma: int, candidate_pairs, seed=0) -> float:
    """Monte Carlo ``E_sigma sup_(p,q) (1/m) sum_i sigma_i |K(p, s_i) - K(q, s_i)|``.

    The supremum runs over the finite ``candidate_pairs`` (shape ``(J, 2, d)``),
    so this underestimates the supremum over all query pairs.
    """
    S = _as_pointset(S)
    pairs = np.asarray(candidate_pairs, dtype=float).reshape(-1, 2, S.d)
    F = np.abs(signature_matrix(spec, S, pairs[:, 0]) - signature_matrix(spec, S, pairs[:, 1]))
    rng = np.random.default_rng(seed)
    sigma = rng.choice([-1.0, 1.0], size=(n_sigma, S.n))
    return float(np.mean(np.max(sigma @ F.T, axis=1)) / S.n)
