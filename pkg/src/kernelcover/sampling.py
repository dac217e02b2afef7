"""Sample sizes for cover-samples and KDE-samples, and the random draw itself.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec, critical_radius, lipschitz
from .signatures import PointSet, _as_pointset

MODES = ("vc", "positive_definite", "recursive")
_MODE_ALIASES = {"pd": "positive_definite"}


@dataclass(frozen=True)
class SampleSizeConfig:
    mode: str = "vc"
    C_vc: float = 0.5
    C_rec: float = 1.0
    C_pd: float = 1.0 / 49.0
    delta: float = 0.1

    def __post_init__(self):
        mode = _MODE_ALIASES.get(self.mode, self.mode)
        if mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        object.__setattr__(self, "mode", mode)
        if min(self.C_vc, self.C_rec, self.C_pd) <= 0:
            raise ValueError("constants must be positive")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


def _check_eps(eps):
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def recursive_size(L: float, r: float, eps: float, C: float, delta: float, k: int) -> int:
    """``ceil(C (1/eps)^(2+2k) L^2k r^2k log^k(L r / (eps delta)))``."""
    Lr = L * r
    # tiny Lr can push the log negative; the formula has no meaning there
    log_term = max(math.log(Lr / (eps * delta)), 0.0)
    return math.ceil(C * eps ** (-(2 + 2 * k)) * Lr ** (2 * k) * log_term**k)


def cover_sample_size(spec: KernelSpec, eps: float, cfg: SampleSizeConfig, d: int) -> int:
    _check_eps(eps)
    if cfg.mode == "vc":
        return math.ceil(cfg.C_vc * (d**spec.k + math.log(1.0 / cfg.delta)) / eps**2)
    if cfg.mode == "positive_definite":
        if not spec.positive_definite:
            raise ValueError(f"{spec.family} kernel is not positive definite")
        return math.floor(cfg.C_pd * math.log(1.0 / cfg.delta) / eps**2) + 1
    return recursive_size(lipschitz(spec), critical_radius(spec, eps), eps, cfg.C_rec, cfg.delta, spec.k)


def kde_sample_size(spec: KernelSpec, eps: float, cfg: SampleSizeConfig) -> int:
    """Random sample size for an eps-KDE-sample (recursive form, super-level k)."""
    _check_eps(eps)
    return recursive_size(lipschitz(spec), critical_radius(spec, eps), eps, cfg.C_rec, cfg.delta, spec.k)


def draw_sample(X: PointSet, size: int, seed=None) -> PointSet:
    """``size`` i.i.d. uniform rows of ``X`` (with replacement); ``X`` itself if ``size >= n``."""
    X = _as_pointset(X)
    if size < 1:
        raise ValueError("sample size must be at least 1")
    if size >= X.n:
        return X
    rng = np.random.default_rng(seed)
    return PointSet(X.points[rng.integers(0, X.n, size=size)])
