"""Point sets, signature vectors and the generalized symmetric difference."""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .kernels import KernelSpec

_owner_ids = itertools.count()

# rows per block when evaluating many queries against a large ground set
_CHUNK_ELEMS = 4_000_000


class PointSetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PointSet:
    """``n`` points in ``R^d`` stored as a read-only ``(n, d)`` float array."""

    points: np.ndarray
    owner: int = field(default_factory=lambda: next(_owner_ids))

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise PointSetError(f"expected a nonempty (n, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise PointSetError("point set contains non-finite coordinates")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return self.points if dtype is None else self.points.astype(dtype)


@dataclass(frozen=True)
class Signature:
    values: np.ndarray
    owner: int

    def __len__(self):
        return len(self.values)


def _as_pointset(X) -> PointSet:
    return X if isinstance(X, PointSet) else PointSet(X)


def _check_query(X: PointSet, p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.shape[0] != X.d:
        raise PointSetError(f"dimension mismatch: query has {p.shape[0]} coords, points have {X.d}")
    if not np.all(np.isfinite(p)):
        raise PointSetError("query contains non-finite coordinates")
    return p


def signature(spec: KernelSpec, X: PointSet, p) -> Signature:
    X = _as_pointset(X)
    p = _check_query(X, p)
    dist = np.sqrt(np.sum((X.points - p) ** 2, axis=1))
    return Signature(spec.profile(dist), X.owner)


def signature_matrix(spec: KernelSpec, X: PointSet, queries) -> np.ndarray:
    """Signatures of many queries at once, one row per query."""
    X = _as_pointset(X)
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    if Q.shape[1] != X.d:
        raise PointSetError(f"dimension mismatch: queries have {Q.shape[1]} coords, points have {X.d}")
    out = np.empty((Q.shape[0], X.n))
    step = max(1, _CHUNK_ELEMS // X.n)
    for i in range(0, Q.shape[0], step):
        out[i : i + step] = spec.profile(cdist(Q[i : i + step], X.points))
    return out


def ddelta(w: Signature, w2: Signature) -> float:
    if w.owner != w2.owner:
        raise PointSetError("signatures were computed against different point sets")
    if len(w) != len(w2):
        raise PointSetError("signature lengths differ")
    return float(np.mean(np.abs(w.values - w2.values)))


def min_ddelta(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each row of ``A``, the smallest d_delta to a row of ``B`` and its index."""
    n = A.shape[1]
    best = np.empty(A.shape[0])
    arg = np.empty(A.shape[0], dtype=int)
    step = max(1, _CHUNK_ELEMS // max(1, B.shape[0] * n))
    for i in range(0, A.shape[0], step):
        D = cdist(A[i : i + step], B, metric="cityblock") / n
        arg[i : i + step] = np.argmin(D, axis=1)
        best[i : i + step] = D[np.arange(D.shape[0]), arg[i : i + step]]
    return best, arg


def kde(spec: KernelSpec, X: PointSet, p) -> float:
    return float(np.mean(signature(spec, X, p).values))


def kde_many(spec: KernelSpec, X: PointSet, queries) -> np.ndarray:
    return signature_matrix(spec, X, queries).mean(axis=1)


def load_points(path) -> PointSet:
    """Read a CSV (one row per point) or a JSON array of arrays."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as e:
            raise PointSetError(f"{path}: malformed JSON at line {e.lineno}: {e.msg}") from None
        if not isinstance(rows, list) or not rows:
            raise PointSetError(f"{path}: expected a nonempty array of arrays")
        width = None
        for i, row in enumerate(rows):
            if not isinstance(row, list) or (width is not None and len(row) != width):
                raise PointSetError(f"{path}: row {i} is not a list of length {width}")
            width = len(row)
        return PointSet(np.array(rows, dtype=float))
    rows = []
    width = None
    for lineno, rec in enumerate(csv.reader(text.splitlines()), start=1):
        if not rec or all(not c.strip() for c in rec):
            continue
        try:
            row = [float(c) for c in rec]
        except ValueError:
            raise PointSetError(f"{path}: line {lineno}: non-numeric field in {rec!r}") from None
        if width is not None and len(row) != width:
            raise PointSetError(f"{path}: line {lineno}: expected {width} fields, got {len(row)}")
        width = len(row)
        rows.append(row)
    if not rows:
        raise PointSetError(f"{path}: no points")
    return PointSet(np.array(rows))


def save_points(path, points) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in pts:
            w.writerow([f"{v:.17g}" for v in row])
