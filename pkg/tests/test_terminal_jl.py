import math

import numpy as np
import pytest

from kernelcover.oracle import verify_terminal
from kernelcover.signatures import PointSet
from kernelcover.terminal_jl import (
    EmbeddingInfeasible,
    SolverConfig,
    _project_intersection,
    build_embedding,
    embed,
    embed_many,
    embed_with_retries,
    jl_dim,
)


def test_jl_dim():
    assert jl_dim(100, 0.5, 1000) == math.ceil(8 * math.log(100) / 0.25) == 148
    assert jl_dim(100, 0.5, 3) == 3
    with pytest.raises(ValueError):
        jl_dim(2, 1.0, 10)
    with pytest.raises(ValueError):
        jl_dim(1, 0.5, 10)


def test_anchor_images_and_seed(rng):
    S = PointSet(rng.normal(size=(20, 6)))
    e1, e2 = build_embedding(S, 0.5, seed=4), build_embedding(S, 0.5, seed=4)
    assert np.array_equal(e1.proj, e2.proj)
    assert np.all(e1.anchor_images[:, -1] == 0)
    assert np.allclose(e1.anchor_images[:, :-1], S.points @ e1.proj.T)
    # m == d still draws a random map
    assert e1.m == 6 and not np.allclose(e1.proj, np.eye(6))
    for i, s in enumerate(S.points):
        assert np.array_equal(embed(e1, s), e1.anchor_images[i])


def test_projection_rows_orthogonal(rng):
    S = PointSet(rng.normal(size=(5, 40)))
    emb = build_embedding(S, 0.9, seed=1)
    P = emb.proj
    assert P.shape == (emb.m, 40) and emb.m < 40
    assert np.allclose(P @ P.T, (40 / emb.m) * np.eye(emb.m))


@pytest.mark.parametrize("n,d,eps", [(30, 8, 0.5), (40, 300, 0.6), (60, 500, 0.5)])
def test_nearest_anchor_isometry_and_last_coord(rng, n, d, eps):
    S = PointSet(rng.normal(size=(n, d)))
    Q = rng.normal(scale=1.3, size=(60, d))
    emb, img, _ = embed_with_retries(S, Q, eps, seed=2)
    nn = np.argmin(np.linalg.norm(Q[:, None] - S.points[None], axis=2), axis=1)
    want = np.linalg.norm(Q - S.points[nn], axis=1)
    got = np.linalg.norm(img - emb.anchor_images[nn], axis=1)
    assert np.allclose(got, want, rtol=1e-9, atol=0)
    assert np.all(img[:, -1] >= 0)


def test_constraints_hold_on_success(rng):
    n, d = 50, 400
    S = PointSet(rng.normal(size=(n, d)))
    emb = build_embedding(S, 0.5, seed=3)
    assert emb.m < d
    for q in rng.normal(size=(20, d)):
        f = embed(emb, q)
        nn = np.argmin(np.linalg.norm(S.points - q, axis=1))
        v = q - S.points[nn]
        z = f[:-1] - emb.anchor_images[nn, :-1]
        U = S.points - S.points[nn]
        lhs = np.abs((U @ emb.proj.T) @ z - U @ v)
        rhs = 0.5 * np.linalg.norm(v) * np.linalg.norm(U, axis=1)
        assert np.all(lhs <= rhs + 1e-6 * np.maximum(rhs, 1e-12))
        assert np.linalg.norm(z) <= np.linalg.norm(v) * (1 + 1e-12)


def test_terminal_property_full_dimension(rng):
    S = PointSet(rng.normal(size=(40, 12)))
    Q = rng.normal(scale=1.5, size=(1000, 12))
    emb, img, _ = embed_with_retries(S, Q, 0.5, seed=8)
    rep = verify_terminal(emb, Q, 0.5, images=img)
    assert rep.passed, rep.details


def test_two_sided_distortion_reduced_dimension(rng):
    # below full dimension the map is a (1 +- eps') embedding for outer points
    S = PointSet(rng.normal(size=(50, 600)))
    Q = rng.normal(size=(100, 600))
    emb, img, _ = embed_with_retries(S, Q, 0.5, seed=1)
    rep = verify_terminal(emb, Q, 0.5, images=img)
    assert emb.m < 600
    assert rep.details["min_ratio"] >= 0.5 and rep.details["max_ratio"] <= 1.5


def test_dykstra_projection_matches_brute_force():
    # two slabs and a ball in the plane; compare with a fine grid search
    A = np.array([[1.0, 0.0], [1.0, 1.0]])
    b = np.array([0.8, 1.5])
    w = np.array([0.1, 0.2])
    c = np.array([-1.0, -0.5])
    z, viol, _ = _project_intersection(c, A, b, w, 1.2, SolverConfig())
    g = np.linspace(-1.3, 1.3, 2601)
    G = np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
    feas = (np.linalg.norm(G, axis=1) <= 1.2) & np.all(np.abs(G @ A.T - b) <= w, axis=1)
    best = G[feas][np.argmin(np.linalg.norm(G[feas] - c, axis=1))]
    assert viol <= 1e-9
    assert np.linalg.norm(z - c) <= np.linalg.norm(best - c) + 1e-9
    assert np.linalg.norm(z - best) < 5e-3


def test_infeasible_raises_with_violation():
    A = np.array([[1.0, 0.0]])
    z, viol, _ = _project_intersection(np.zeros(2), A, np.array([5.0]), np.array([0.1]), 1.0,
                                       SolverConfig(max_iters=200))
    assert viol > 1.0


def test_embed_infeasible_error(rng, monkeypatch):
    S = PointSet(rng.normal(size=(10, 4)))
    emb = build_embedding(S, 0.5, seed=0)
    import kernelcover.terminal_jl as tj

    monkeypatch.setattr(tj, "_project_intersection", lambda *a: (np.zeros(emb.m), 0.3, 7))
    with pytest.raises(EmbeddingInfeasible) as exc:
        embed(emb, rng.normal(size=4))
    assert exc.value.violation == 0.3
    with pytest.raises(EmbeddingInfeasible):
        embed_with_retries(S, rng.normal(size=(2, 4)), 0.5, seed=0, retries=3)


def test_dimension_mismatch(rng):
    emb = build_embedding(PointSet(rng.normal(size=(5, 3))), 0.5, seed=0)
    with pytest.raises(ValueError):
        embed(emb, np.zeros(4))
    assert embed_many(emb, rng.normal(size=(3, 3))).shape == (3, emb.m + 1)
