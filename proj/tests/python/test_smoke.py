"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import distmat


def random_distance_matrix(n, seed):
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    return np.abs(u[:, None] - u[None, :])


def numpy_center(d):
    e = d * d / -2
    return e - e.mean(axis=1, keepdims=True) - e.mean(axis=0, keepdims=True) + e.mean()


def test_validate_flags():
    good = np.array([[0.0, 1.0], [1.0, 0.0]])
    rep = distmat.validate(good)
    assert rep["is_symmetric"] and rep["is_hollow"]
    assert rep["first_violation"] is None

    bad = np.array([[0.0, 1.0], [2.0, 0.0]])
    rep = distmat.validate(bad)
    assert not rep["is_symmetric"]
    assert rep["first_violation"] == (0, 1)

    naive = distmat.validate(bad, naive=True)
    assert naive["is_symmetric"] == rep["is_symmetric"]


def test_center_matches_numpy():
    d = random_distance_matrix(64, 1)
    ours = distmat.center(d)
    theirs = numpy_center(d)
    assert np.allclose(ours, theirs, atol=1e-12)
    naive = distmat.center(d, naive=True)
    assert np.allclose(naive, ours, atol=1e-12)


def test_center_rejects_invalid_input():
    bad = np.array([[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(ValueError):
        distmat.center(bad)
    # trusted input skips the scan
    distmat.center(bad, skip_validation=True)


def test_pcoa_recovers_a_segment():
    d = np.array([[0.0, 2.0], [2.0, 0.0]])
    res = distmat.pcoa(d)
    assert res["eigenvalues"] == pytest.approx([2.0, 0.0], abs=1e-12)
    coords = res["coordinates"]
    assert coords.shape == (2, 1)
    assert abs(coords[0, 0] - coords[1, 0]) == pytest.approx(2.0, abs=1e-12)
    assert res["proportion_explained"] == pytest.approx([1.0])
    assert not res["negative_eigenvalue_warning"]


def test_pcoa_point_cloud_distances():
    rng = np.random.default_rng(7)
    pts = rng.random((20, 3))
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    res = distmat.pcoa(d)
    coords = res["coordinates"]
    rec = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=2)
    assert np.allclose(rec, d, rtol=1e-6, atol=1e-9)


def test_mantel_self_correlation():
    d = random_distance_matrix(10, 3)
    res = distmat.mantel(d, d, permutations=199, seed=42)
    assert res["statistic"] == pytest.approx(1.0, abs=1e-12)
    assert 0.0 < res["p_value"] <= 1.0
    assert res["permuted_stats"].shape == (199,)

    again = distmat.mantel(d, d, permutations=199, seed=42, threads=4)
    assert np.array_equal(res["permuted_stats"], again["permuted_stats"])


def test_mantel_naive_agrees_with_fused():
    x = random_distance_matrix(12, 5)
    y = random_distance_matrix(12, 6)
    fused = distmat.mantel(x, y, permutations=99, seed=1)
    naive = distmat.mantel(x, y, permutations=99, seed=1, naive=True)
    assert fused["statistic"] == pytest.approx(naive["statistic"], abs=1e-10)
    assert fused["p_value"] == naive["p_value"]
    assert np.max(np.abs(fused["permuted_stats"] - naive["permuted_stats"])) <= 1e-10


def test_mantel_degenerate_variance():
    const = np.ones((3, 3)) - np.eye(3)
    other = random_distance_matrix(3, 9)
    with pytest.raises(ArithmeticError):
        distmat.mantel(const, other, permutations=9)


def test_condensed_helpers():
    m = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
    assert np.array_equal(distmat.condensed_form(m), [1.0, 2.0, 3.0])
    assert distmat.condensed_index(0, 1, 3) == 0
    assert distmat.condensed_index(2, 4, 6) == 10
    with pytest.raises(ValueError):
        distmat.condensed_index(2, 1, 3)


def test_make_permutations():
    perms = distmat.make_permutations(5, 100, seed=3)
    assert perms.shape == (100, 5)
    assert perms.dtype == np.int32
    assert np.array_equal(np.sort(perms, axis=1), np.tile(np.arange(5), (100, 1)))
    assert np.array_equal(perms, distmat.make_permutations(5, 100, seed=3, threads=4))
