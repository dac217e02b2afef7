"""Lower-bound witnesses: sphere intersections, level-set grids, packings and counting bounds."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product

import numpy as np

from .kernels import KernelSpec
from .signatures import PointSet, signature_matrix


class SphereIntersectionError(ValueError):
    pass


@dataclass(frozen=True)
class SphereSystem:
    """``d`` spheres in ``R^d``; sphere ``k`` is centred at the basis vector ``e_k``."""

    radii: tuple

    def __post_init__(self):
        r = tuple(float(v) for v in np.asarray(self.radii, dtype=float).reshape(-1))
        if not r or min(r) <= 0:
            raise SphereIntersectionError("radii must be positive")
        object.__setattr__(self, "radii", r)

    @property
    def dim(self) -> int:
        return len(self.radii)

    @property
    def radii_at_least_one(self) -> bool:
        return min(self.radii) >= 1.0

    def quadratic(self) -> tuple[float, float, float]:
        """Coefficients ``(a, b, c)`` of the quadratic satisfied by ``y = ||x||^2``."""
        one_minus = 1.0 - np.square(self.radii)
        return self.dim / 4.0, 0.5 * one_minus.sum() - 1.0, 0.25 * np.square(one_minus).sum()

    def discriminant(self) -> float:
        a, b, c = self.quadratic()
        return b * b - 4.0 * a * c

    def discriminant_from_offsets(self) -> float:
        """``Delta`` via the offsets ``B_k = r_k^2 - 1``.

        ``4 Delta = (sum B)^2 + 4 + 4 sum B - d ||B||_2^2``; the sums reduce to
        the 1-norm when every radius is at least 1.
        """
        B = np.square(self.radii) - 1.0
        s = B.sum()
        return (s * s + 4.0 + 4.0 * s - self.dim * np.dot(B, B)) / 4.0

    def residuals(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        E = np.eye(self.dim)
        return np.abs(np.linalg.norm(x[None, :] - E, axis=1) - np.asarray(self.radii))


def sphere_intersection(sys: SphereSystem) -> tuple[np.ndarray, np.ndarray]:
    """The two intersection points, ordered by increasing ``||x||^2``."""
    if not isinstance(sys, SphereSystem):
        sys = SphereSystem(sys)
    a, b, c = sys.quadratic()
    disc = b * b - 4.0 * a * c
    if disc <= 0:
        raise SphereIntersectionError(
            f"no transversal intersection: Delta = {sys.discriminant_from_offsets():.6g}"
        )
    sq = math.sqrt(disc)
    # stable pair of roots
    t = -0.5 * (b + math.copysign(sq, b))
    y1, y2 = sorted((t / a, c / t if t != 0 else -b / a))
    if y1 < 0:
        raise SphereIntersectionError(f"negative root y = {y1:.6g}")
    r2 = np.square(sys.radii)
    return 0.5 * (1.0 + y1 - r2), 0.5 * (1.0 + y2 - r2)


@dataclass(frozen=True)
class WitnessGrid:
    eps: float
    dim: int
    indices: tuple           # admissible integers i
    index_vectors: np.ndarray  # (N, d) chosen i per axis
    corners: np.ndarray        # (N, d)
    max_residual: float

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(np.log(1.0 / (np.asarray(self.indices) * self.eps)))

    @property
    def annulus_cells(self) -> int:
        return max(len(self.indices) - 1, 0) ** self.dim

    def ground_set(self) -> PointSet:
        return PointSet(np.eye(self.dim))


def admissible_indices(eps: float, d: int) -> range:
    lo = math.ceil(1.0 / ((math.e + 1.0 / d) * eps))
    hi = math.floor(1.0 / (math.e * eps))
    return range(lo, hi + 1)


def witness_grid(eps: float, d: int) -> WitnessGrid:
    """Corners where Gaussian level-set spheres ``K(e_k, x) = i eps`` meet, one sphere per axis."""
    idx = admissible_indices(eps, d)
    if len(idx) == 0:
        raise ValueError(
            f"no integer in [{1 / ((math.e + 1 / d) * eps):.4g}, {1 / (math.e * eps):.4g}]; use a smaller eps"
        )
    radius = {i: math.sqrt(math.log(1.0 / (i * eps))) for i in idx}
    vecs, corners, worst = [], [], 0.0
    for combo in product(idx, repeat=d):
        sys = SphereSystem([radius[i] for i in combo])
        _, x = sphere_intersection(sys)
        worst = max(worst, float(sys.residuals(x).max()))
        vecs.append(combo)
        corners.append(x)
    return WitnessGrid(eps, d, tuple(idx), np.array(vecs, dtype=int), np.array(corners), worst)


def corner_distances(grid: WitnessGrid) -> np.ndarray:
    """Exact pairwise d_delta between corners: ``eps * sum_k |i_k - j_k| / d``."""
    V = grid.index_vectors
    L1 = np.abs(V[:, None, :] - V[None, :, :]).sum(axis=2)
    return grid.eps * L1 / grid.dim


def numeric_corner_distances(spec: KernelSpec, grid: WitnessGrid) -> np.ndarray:
    W = signature_matrix(spec, grid.ground_set(), grid.corners)
    return np.abs(W[:, None, :] - W[None, :, :]).mean(axis=2)


@dataclass(frozen=True)
class PackingCertificate:
    size: int
    witnesses: np.ndarray  # index vectors of the kept corners
    corner_count: int
    annulus_cells: int


def packing_certificate(spec: KernelSpec, grid: WitnessGrid, eps: float | None = None) -> PackingCertificate:
    """Greedy set of corners pairwise more than ``eps`` apart in d_delta.

    Any ``eps/2``-cover of the basis vectors needs a distinct query for each
    kept corner, so ``size`` lower-bounds the cover size.
    """
    if spec.family != "gaussian":
        raise ValueError("the level-set witness grid is built for the Gaussian kernel")
    if spec.sigma != 1.0:
        raise ValueError("the level-set witness grid assumes sigma = 1")
    eps = grid.eps if eps is None else eps
    V = grid.index_vectors
    # separation in integer steps: grid.eps * steps / d > eps
    min_steps = math.floor(eps * grid.dim / grid.eps + 1e-9) + 1
    kept = []
    for i in range(len(V)):
        if all(np.abs(V[i] - V[j]).sum() >= min_steps for j in kept):
            kept.append(i)
    return PackingCertificate(len(kept), V[kept], len(V), grid.annulus_cells)


def combinatorial_bound(eps: float, d: int) -> float:
    """``2^d`` when ``d <= 1/eps``, else ``2^((1 - eps log2(e/eps)) d)``."""
    if not (0.0 < eps < 0.3):
        warnings.warn(f"eps = {eps} is outside (0, 0.3), where the bound is stated", stacklevel=2)
    if d * eps <= 1.0 + 1e-12:
        return float(2**d)
    return 2.0 ** ((1.0 - eps * math.log2(math.e / eps)) * d)


def hamming_count(d: int, eps: float) -> int:
    """Points of ``{0,1}^d`` within Hamming distance ``floor(eps d)`` of a fixed point."""
    k = math.floor(eps * d + 1e-9)
    N = sum(math.comb(d, i) for i in range(k + 1))
    bound = (math.e / eps) ** (eps * d)
    if N > bound * (1 + 1e-12):
        raise ArithmeticError(f"Hamming ball count {N} exceeds (e/eps)^(eps d) = {bound}")
    return N


def veronese_lift(x) -> np.ndarray:
    """``x -> (x, ||x||^2)``."""
    x = np.asarray(x, dtype=float)
    return np.concatenate([x, np.sum(x * x, axis=-1, keepdims=True)], axis=-1)


def ball_halfspace(center, radius: float) -> tuple[np.ndarray, float]:
    """Normal and offset with ``||x - c|| <= s`` iff ``normal . lift(x) <= offset``."""
    c = np.asarray(center, dtype=float)
    return np.append(-2.0 * c, 1.0), radius * radius - float(c @ c)
