import math

import numpy as np
import pytest

from hamsplit.geometry import (
    Ball,
    Hyperplane,
    Polytope,
    ball_cover_points,
    clip_halfplane,
    polygon_area,
    rotation_matrix,
    sphere_lattice,
    tangent_basis,
)


def test_hyperplane_requires_unit_normal():
    with pytest.raises(ValueError):
        Hyperplane(np.array([1.0, 1.0]), 0.0)
    with pytest.raises(ValueError):
        Hyperplane(np.array([1.0, 0.0]), math.inf)


def test_negation_swaps_sides():
    H = Hyperplane(np.array([0.6, 0.8]), 0.3)
    G = -H
    assert np.allclose(G.normal, -H.normal) and G.offset == -0.3
    x = np.array([1.0, 1.0])
    assert H.signed_distance(x) == pytest.approx(-G.signed_distance(x))


def test_hyperplane_json_round_trip():
    H = Hyperplane(np.array([0.0, 0.0, 1.0]), -1.25)
    G = Hyperplane.from_dict(H.to_dict())
    assert np.array_equal(G.normal, H.normal) and G.offset == H.offset


def test_clip_area_of_square():
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
    assert polygon_area(clip_halfplane(sq, np.array([1.0, 0.0]), 0.75)) == pytest.approx(0.25)


def test_ball_cover_points_contain_ball():
    pts = ball_cover_points(np.zeros(2), 1.0)
    P = Polytope(pts)
    for a in np.linspace(0, 2 * np.pi, 97):
        assert P.contains(np.array([math.cos(a), math.sin(a)]))


def test_polytope_support_and_slice():
    P = Polytope(np.array([[0, 0], [2, 0], [2, 1], [0, 1]], float))
    assert P.support(np.array([1.0, 0.0])) == pytest.approx((0.0, 2.0))
    lo, hi = P.slice_interval(np.array([1.0, 0.0]), 1.0)
    assert hi - lo == pytest.approx(1.0)
    assert np.allclose(P.centroid, [1.0, 0.5])


def test_ball_slice_point_nearest_target():
    B = Ball(np.zeros(2), 1.0)
    p = B.slice_point(np.array([1.0, 0.0]), 0.5, target=np.array([0.5, 3.0]))
    assert p[0] == pytest.approx(0.5) and np.linalg.norm(p) <= 1 + 1e-12


@pytest.mark.parametrize("n", [2, 3, 5])
def test_sphere_lattice_unit_and_deterministic(n):
    a, b = sphere_lattice(n, 64), sphere_lattice(n, 64)
    assert np.array_equal(a, b)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)


def test_tangent_basis_orthonormal():
    v = np.array([1.0, 2.0, 2.0]) / 3.0
    T = tangent_basis(v)
    assert np.allclose(T.T @ T, np.eye(2)) and np.allclose(v @ T, 0.0)


def test_rotation_matrix_is_orthogonal():
    R = rotation_matrix(3, np.random.default_rng(1))
    assert np.allclose(R @ R.T, np.eye(3)) and np.linalg.det(R) == pytest.approx(1.0)
