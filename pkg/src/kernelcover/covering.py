"""Lattice nets of critical balls and the naive grid cover of a kernel range space."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from .kernels import KernelSpec, critical_radius, lipschitz
from .signatures import PointSet, _as_pointset

DEFAULT_MAX_POINTS = 2_000_000


class CoverTooLargeError(RuntimeError):
    """The lattice would exceed the point budget; ``estimate`` is the expected size."""

    def __init__(self, estimate: float, budget: int, dim: int):
        self.estimate = estimate
        self.budget = budget
        self.dim = dim
        super().__init__(
            f"lattice cover in dimension {dim} needs about {estimate:.3g} points, "
            f"over the budget of {budget}"
        )


@dataclass
class Cover:
    queries: np.ndarray
    far_point: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.queries = np.asarray(self.queries, dtype=float).reshape(-1, len(self.far_point))
        self.far_point = np.asarray(self.far_point, dtype=float).reshape(-1)

    @property
    def ambient_dim(self) -> int:
        return self.far_point.shape[0]

    def __len__(self):
        return self.queries.shape[0] + 1

    def all_points(self) -> np.ndarray:
        return np.vstack([self.queries, self.far_point[None, :]])

    def to_dict(self) -> dict:
        meta = dict(self.meta)
        kernel = meta.pop("kernel", None)
        out = {
            "epsilon": meta.pop("epsilon", None),
            "kernel": kernel.family if isinstance(kernel, KernelSpec) else kernel,
            "sigma": kernel.sigma if isinstance(kernel, KernelSpec) else meta.pop("sigma", None),
            "ambient_dim": self.ambient_dim,
            "seed": meta.pop("seed", None),
        }
        if isinstance(kernel, KernelSpec) and kernel.family == "truncated_gaussian":
            out["trunc_tau"] = kernel.trunc_tau
        meta.pop("ambient_dim", None)
        out["construction"] = meta.pop("construction", None)
        out["meta"] = meta
        out["far_point"] = self.far_point.tolist()
        out["queries"] = self.queries.tolist()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Cover":
        meta = dict(d.get("meta", {}))
        if d.get("kernel") is not None:
            meta["kernel"] = KernelSpec(d["kernel"], float(d.get("sigma") or 1.0), float(d.get("trunc_tau", 0.1)))
        for key in ("epsilon", "seed", "construction"):
            meta[key] = d.get(key)
        meta["ambient_dim"] = d["ambient_dim"]
        far = np.asarray(d["far_point"], dtype=float)
        q = np.asarray(d["queries"], dtype=float).reshape(-1, far.shape[0])
        return cls(q, far, meta)

    def save(self, path) -> None:
        # json writes floats with repr, which round-trips bit-exactly
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> "Cover":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: malformed JSON at line {e.lineno}: {e.msg}") from None


def lattice_spacing(tau: float, d: int) -> float:
    """Spacing whose cells have half-diagonal exactly ``tau``."""
    return 2.0 * tau / math.sqrt(d)


def estimate_ball_count(radius: float, tau: float, d: int) -> float:
    """Expected lattice points inside a ball of radius ``radius + tau``."""
    h = lattice_spacing(tau, d)
    R = radius + tau
    log_vol = (d / 2) * math.log(math.pi) - gammaln(d / 2 + 1) + d * math.log(R / h)
    return math.exp(min(log_vol, 700.0))


def _ball_indices(center, origin, h, R, budget):
    """Integer vectors ``k`` with ``||origin + h k - center|| <= R``, lexicographic."""
    d = center.shape[0]
    idx = np.zeros((1, 0), dtype=np.int64)
    partial = np.zeros(1)
    R2 = R * R
    for j in range(d):
        rem = np.sqrt(np.maximum(R2 - partial, 0.0))
        lo = np.ceil((center[j] - rem - origin[j]) / h).astype(np.int64)
        hi = np.floor((center[j] + rem - origin[j]) / h).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total > budget:
            raise CoverTooLargeError(float(total), budget, d)
        rep = np.repeat(np.arange(len(counts)), counts)
        offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        k = lo[rep] + offs
        coord = origin[j] + h * k - center[j]
        partial = partial[rep] + coord * coord
        keep = partial <= R2 * (1 + 1e-12)
        idx = np.hstack([idx[rep][keep], k[keep, None]])
        partial = partial[keep]
    return idx


def ball_net(center, radius: float, tau: float, origin=None, max_points: int = DEFAULT_MAX_POINTS):
    """Lattice points within ``radius + tau`` of ``center``.

    Every point of the closed ball of radius ``radius`` lies within ``tau`` of
    some returned point. With ``origin`` given, the lattice is anchored there
    instead of at ``center`` so that nets of different balls share points.
    """
    if radius <= 0 or tau <= 0:
        raise ValueError("radius and tau must be positive")
    center = np.asarray(center, dtype=float).reshape(-1)
    origin = center if origin is None else np.asarray(origin, dtype=float).reshape(-1)
    h = lattice_spacing(tau, center.shape[0])
    idx = _ball_indices(center, origin, h, radius + tau, max_points)
    return origin + h * idx


def far_point(spec: KernelSpec, X: PointSet, eps: float) -> np.ndarray:
    """A point farther than the critical radius from every point of ``X``.

    Placed two critical radii beyond the largest first coordinate of ``X``.
    """
    X = _as_pointset(X)
    r = critical_radius(spec, eps)
    i = int(np.argmax(X.points[:, 0]))
    p = X.points[i].copy()
    p[0] += 2.0 * r
    return p


def naive_cover(spec: KernelSpec, X: PointSet, eps: float, *, threads: int = 1,
                max_points: int = DEFAULT_MAX_POINTS, seed=None) -> Cover:
    """Union of lattice nets at resolution ``eps / L`` around every critical ball, plus a far point.

    Raises :class:`CoverTooLargeError` before enumerating anything if the
    expected size exceeds ``max_points``.
    """
    X = _as_pointset(X)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    meta = {"epsilon": eps, "kernel": spec, "seed": seed, "ambient_dim": X.d,
            "construction": "naive_grid"}
    if eps >= 1:
        return Cover(np.empty((0, X.d)), far_point(spec, X, 0.5), meta)

    r = critical_radius(spec, eps)
    tau = eps / lipschitz(spec)
    est = X.n * estimate_ball_count(r, tau, X.d)
    if est > max_points:
        raise CoverTooLargeError(est, max_points, X.d)

    origin = X.points.min(axis=0)
    h = lattice_spacing(tau, X.d)

    def one(center):
        return _ball_indices(center, origin, h, r + tau, max_points)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(one, X.points))
    else:
        parts = [one(c) for c in X.points]

    # dedup on integer lattice indices, keeping first-seen order
    allidx = np.vstack(parts)
    _, first = np.unique(allidx, axis=0, return_index=True)
    allidx = allidx[np.sort(first)]
    queries = origin + h * allidx
    meta.update(lattice_spacing=h, net_radius=tau, critical_radius=r)
    return Cover(queries, far_point(spec, X, eps), meta)
