import itertools
import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from kernelcover.covering import Cover, CoverTooLargeError, ball_net, far_point, naive_cover
from kernelcover.kernels import KernelSpec, critical_radius, eval_kernel, lipschitz
from kernelcover.signatures import PointSet, signature_matrix


def uniform_ball(rng, center, radius, count):
    d = len(center)
    v = rng.normal(size=(count, d))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.asarray(center) + v * radius * rng.random(count)[:, None] ** (1 / d)


def test_ball_net_1d():
    net = ball_net([0.0], 1.0, 0.5)
    assert sorted(net[:, 0].tolist()) == [-1.0, 0.0, 1.0]
    assert ball_net([0.0], 1.0, 2.0).tolist() == [[0.0]]


@pytest.mark.parametrize("d,radius,tau", [(2, 1.0, 0.5), (3, 1.3, 0.4), (4, 0.9, 0.35)])
def test_ball_net_monte_carlo_coverage(rng, d, radius, tau):
    center = rng.normal(size=d)
    net = ball_net(center, radius, tau)
    samples = uniform_ball(rng, center, radius, 100_000)
    dist, _ = cKDTree(net).query(samples)
    assert dist.max() <= tau * (1 + 1e-12)


def brute_lattice(center, origin, h, R):
    d = len(center)
    lo = np.floor((np.asarray(center) - R - origin) / h).astype(int) - 1
    hi = np.ceil((np.asarray(center) + R - origin) / h).astype(int) + 1
    pts = []
    for k in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        x = origin + h * np.array(k)
        if np.linalg.norm(x - center) <= R:
            pts.append(tuple(k))
    return set(pts)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_ball_net_matches_brute_force(rng, d):
    center = rng.normal(size=d)
    origin = rng.normal(size=d)
    tau, radius = 0.3, 0.8
    h = 2 * tau / math.sqrt(d)
    net = ball_net(center, radius, tau, origin=origin)
    got = {tuple(k) for k in np.rint((net - origin) / h).astype(int)}
    assert got == brute_lattice(center, origin, h, radius + tau)


def test_naive_cover_1d_triangle_exhaustive():
    spec = KernelSpec("triangle", 1.0)
    X = PointSet([[0.0]])
    cover = naive_cover(spec, X, 0.5)
    assert sorted(cover.queries[:, 0].tolist()) == [-1.0, 0.0, 1.0]
    grid = np.arange(-3.0, 3.0 + 1e-9, 1e-3)[:, None]
    W = signature_matrix(spec, X, grid)
    C = signature_matrix(spec, X, cover.all_points())
    err = np.abs(W[:, None, :] - C[None, :, :]).mean(axis=2).min(axis=1)
    assert err.max() <= 0.5


def test_naive_cover_size_bound(rng):
    for family, d, eps in [("gaussian", 2, 0.3), ("epanechnikov", 3, 0.4), ("triangle", 2, 0.25)]:
        spec = KernelSpec(family)
        X = PointSet(rng.uniform(0, 1, size=(5, d)))
        cover = naive_cover(spec, X, eps)
        r, L = critical_radius(spec, eps), lipschitz(spec)
        bound = X.n * (math.ceil(2 * r * math.sqrt(d) / (2 * eps / L)) + 1) ** d + 1
        assert len(cover.queries) <= bound
        # dedup: no lattice point twice
        assert len(np.unique(cover.queries, axis=0)) == len(cover.queries)


def test_naive_cover_eps_one_is_far_point_only(gaussian):
    cover = naive_cover(gaussian, PointSet([[0.0, 0.0]]), 1.0)
    assert len(cover) == 1 and cover.queries.shape == (0, 2)
    with pytest.raises(ValueError):
        naive_cover(gaussian, PointSet([[0.0]]), 0.0)


def test_far_point_examples(gaussian):
    fp = far_point(gaussian, PointSet([[0.0]]), 0.1)
    assert fp[0] == pytest.approx(2 * math.sqrt(math.log(10)))
    assert fp[0] == pytest.approx(3.0349, abs=1e-4)
    assert eval_kernel(gaussian, fp, [0.0]) == pytest.approx(1e-4, rel=1e-9)
    fp = far_point(KernelSpec("triangle"), PointSet([[1.0], [5.0], [-2.0]]), 0.5)
    assert fp.tolist() == [6.0]


def test_far_point_signature_below_eps(any_kernel, rng):
    X = PointSet(rng.normal(size=(20, 3)))
    for eps in (0.05, 0.3, 0.7):
        fp = far_point(any_kernel, X, eps)
        assert signature_matrix(any_kernel, X, fp[None, :]).max() < eps


@pytest.mark.parametrize("family,eps", [("gaussian", 0.3), ("quartic", 0.35), ("laplace", 0.4)])
def test_cover_soundness_in_and_out(rng, family, eps):
    spec = KernelSpec(family)
    X = PointSet(rng.uniform(0, 1, size=(4, 2)))
    cover = naive_cover(spec, X, eps)
    r = critical_radius(spec, eps)
    C = signature_matrix(spec, X, cover.queries)
    # inside the union of critical balls: the lattice alone suffices
    centers = X.points[rng.integers(0, X.n, 10_000)]
    inside = np.vstack([uniform_ball(rng, c, r, 1) for c in centers])
    W = signature_matrix(spec, X, inside)
    err = np.abs(W[:, None, :] - C[None, :, :]).mean(axis=2).min(axis=1)
    assert err.max() <= eps
    # outside every critical ball: the far point alone suffices
    out = rng.uniform(-3 * r, 1 + 3 * r, size=(40_000, 2))
    dmin = np.linalg.norm(out[:, None, :] - X.points[None], axis=2).min(axis=1)
    out = out[dmin > r][:10_000]
    Wo = signature_matrix(spec, X, out)
    Wf = signature_matrix(spec, X, cover.far_point[None, :])
    assert np.abs(Wo - Wf).mean(axis=1).max() <= eps


def test_too_large_is_refused_up_front(gaussian):
    X = PointSet(np.zeros((1, 12)))
    with pytest.raises(CoverTooLargeError) as exc:
        naive_cover(gaussian, X, 0.1, max_points=10_000)
    assert exc.value.estimate > 10_000


def test_cover_json_round_trip(tmp_path, rng):
    spec = KernelSpec("truncated_gaussian", 0.8, 0.2)
    cover = naive_cover(spec, PointSet(rng.normal(size=(3, 2))), 0.4, seed=99)
    path = tmp_path / "c.json"
    cover.save(path)
    back = Cover.load(path)
    assert np.array_equal(back.queries, cover.queries)
    assert np.array_equal(back.far_point, cover.far_point)
    assert back.meta["kernel"] == spec and back.meta["epsilon"] == 0.4 and back.meta["seed"] == 99
    raw = (tmp_path / "c.json").read_text()
    for key in ("epsilon", "kernel", "sigma", "ambient_dim", "seed", "far_point", "queries"):
        assert f'"{key}"' in raw
