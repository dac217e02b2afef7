"""Radial kernels with their Lipschitz constants and critical radii.

Every kernel here is centrally symmetric, ``K(p, x) = g(||p - x||)``, with
``g(0) = 1`` and values in ``[0, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FAMILIES = (
    "gaussian",
    "laplace",
    "epanechnikov",
    "triangle",
    "quartic",
    "triweight",
    "truncated_gaussian",
)

# Degree k of the semi-super-level predicate (feeds the O(d^k) VC bound).
_SIMPLE_K = {
    "gaussian": 2,
    "laplace": 3,
    "epanechnikov": 2,
    "triangle": 2,
    "quartic": 2,
    "triweight": 2,
    "truncated_gaussian": 2,
}

_POSITIVE_DEFINITE = {"gaussian", "laplace"}
_SIMPLY_COMPUTABLE = set(FAMILIES) - {"laplace"}


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family with bandwidth ``sigma``.

    ``trunc_tau`` only matters for ``truncated_gaussian``.
    """

    family: str = "gaussian"
    sigma: float = 1.0
    trunc_tau: float = 0.1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise KernelError(
                f"unknown kernel {self.family!r}; valid names: {', '.join(FAMILIES)}"
            )
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise KernelError(f"sigma must be a positive finite number, got {self.sigma}")
        if self.family == "truncated_gaussian" and not (0.0 < self.trunc_tau < 1.0):
            raise KernelError(f"trunc_tau must lie in (0, 1), got {self.trunc_tau}")

    @property
    def k(self) -> int:
        return _SIMPLE_K[self.family]

    @property
    def positive_definite(self) -> bool:
        return self.family in _POSITIVE_DEFINITE

    @property
    def simply_computable(self) -> bool:
        return self.family in _SIMPLY_COMPUTABLE

    def profile(self, dist):
        """Evaluate ``g`` at (an array of) nonnegative distances."""
        t = np.asarray(dist, dtype=float) / self.sigma
        fam = self.family
        if fam == "gaussian":
            out = np.exp(-t * t)
        elif fam == "laplace":
            out = np.exp(-t)
        elif fam == "epanechnikov":
            out = np.maximum(0.0, 1.0 - t * t)
        elif fam == "triangle":
            out = np.maximum(0.0, 1.0 - t)
        elif fam == "quartic":
            out = np.maximum(0.0, 1.0 - t * t) ** 2
        elif fam == "triweight":
            out = np.maximum(0.0, 1.0 - t * t) ** 3
        else:
            tau = self.trunc_tau
            out = np.maximum(0.0, (np.exp(-t * t) - tau) / (1.0 - tau))
        return np.clip(out, 0.0, 1.0)

    def to_dict(self) -> dict:
        d = {"kernel": self.family, "sigma": self.sigma}
        if self.family == "truncated_gaussian":
            d["trunc_tau"] = self.trunc_tau
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        return cls(d["kernel"], float(d.get("sigma", 1.0)), float(d.get("trunc_tau", 0.1)))


def _as_point(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim == 0:
        p = p.reshape(1)
    if not np.all(np.isfinite(p)):
        raise KernelError("non-finite coordinates")
    return p


def eval_kernel(spec: KernelSpec, p, x) -> float:
    p, x = _as_point(p), _as_point(x)
    if p.shape != x.shape:
        raise KernelError(f"dimension mismatch: {p.shape} vs {x.shape}")
    return float(spec.profile(np.linalg.norm(p - x)))


def lipschitz(spec: KernelSpec) -> float:
    s = spec.sigma
    fam = spec.family
    if fam == "gaussian":
        return math.sqrt(2.0 / math.e) / s
    if fam == "truncated_gaussian":
        # the 1/(1 - tau) rescale steepens the Gaussian slope by the same factor
        return math.sqrt(2.0 / math.e) / (s * (1.0 - spec.trunc_tau))
    if fam in ("laplace", "triangle"):
        return 1.0 / s
    if fam == "epanechnikov":
        return 2.0 / s
    if fam == "quartic":
        return 8.0 / (3.0 * math.sqrt(3.0) * s)
    return 96.0 / (25.0 * math.sqrt(5.0) * s)


def critical_radius(spec: KernelSpec, eps: float) -> float:
    """Smallest ``r`` with ``g(r') < eps`` for every ``r' > r``."""
    if not (0.0 < eps < 1.0):
        raise KernelError(f"eps must lie in (0, 1), got {eps}")
    s = spec.sigma
    fam = spec.family
    if fam == "gaussian":
        return s * math.sqrt(math.log(1.0 / eps))
    if fam == "laplace":
        return s * math.log(1.0 / eps)
    if fam == "epanechnikov":
        return s * math.sqrt(1.0 - eps)
    if fam == "triangle":
        return s * (1.0 - eps)
    if fam == "quartic":
        return s * math.sqrt(1.0 - math.sqrt(eps))
    if fam == "triweight":
        return s * math.sqrt(1.0 - eps ** (1.0 / 3.0))
    tau = spec.trunc_tau
    return s * math.sqrt(math.log(1.0 / (tau + (1.0 - tau) * eps)))


def semi_level_member(spec: KernelSpec, p, q, tau: float, x) -> bool:
    """True iff ``|K(p, x) - K(q, x)| >= tau``."""
    if tau <= 0:
        raise KernelError("tau must be positive")
    p, q, x = _as_point(p), _as_point(q), _as_point(x)
    if not (p.shape == q.shape == x.shape):
        raise KernelError("dimension mismatch")
    return abs(eval_kernel(spec, p, x) - eval_kernel(spec, q, x)) >= tau
