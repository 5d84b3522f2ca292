import numpy as np
import pytest

from hamsplit.miranda import Box, EvaluationError, check_faces, miranda_root


def diag_dominant(rng, k):
    A = rng.uniform(-1, 1, size=(k, k))
    A += np.diag(np.sign(rng.uniform(-1, 1, k)) * (np.abs(A).sum(axis=1) + rng.uniform(0.5, 2, k)))
    return A


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_identity_certified(k):
    cert = check_faces(lambda x: x, Box.cube(k))
    assert cert.certified and cert.strength == pytest.approx(1.0)
    assert len(cert.conditions) == 2 * k


def test_weak_coupling_certified_with_exact_margins():
    cert = check_faces(lambda z: np.array([z[0] + 0.3 * z[1], z[1] - 0.2 * z[0]]), Box.cube(2))
    assert cert.certified
    by_axis = {c.axis: [] for c in cert.conditions}
    for c in cert.conditions:
        by_axis[c.axis].append(c.min_observed)
    assert min(by_axis[0]) == pytest.approx(0.7) and min(by_axis[1]) == pytest.approx(0.8)


def test_no_zero_not_certified():
    cert = check_faces(lambda x: x - 2.0, Box.cube(1))
    assert not cert.certified and cert.verdict == "refuted"


def test_grid_must_be_two_or_more():
    with pytest.raises(ValueError):
        check_faces(lambda x: x, Box.cube(2), grid=1)


def test_non_finite_value_reports_node():
    with pytest.raises(EvaluationError) as info:
        check_faces(lambda x: np.array([np.nan if x[0] > 0.5 else x[0], x[1]]), Box.cube(2))
    assert info.value.node[0] > 0.5


def test_orientation_invariance():
    g = lambda z: np.array([z[0] + 0.3 * z[1], z[1] - 0.2 * z[0]])
    flipped = lambda z: -g(z) * np.array([1.0, 1.0])
    a, b = check_faces(g, Box.cube(2)), check_faces(flipped, Box.cube(2))
    assert a.verdict == b.verdict == "certified"
    # negate one component together with its axis
    h = lambda z: np.array([-g(np.array([-z[0], z[1]]))[0], g(np.array([-z[0], z[1]]))[1]])
    assert check_faces(h, Box.cube(2)).verdict == a.verdict


def test_decoupled_root_localised():
    found = miranda_root(lambda z: np.array([z[0] - 0.25, z[1] + 0.5]), Box.cube(2), tol=1e-6)
    assert found is not None
    box, cert = found
    assert box.width <= 1e-6 and box.contains([0.25, -0.5]) and cert.certified


def test_constant_map_pruned():
    assert miranda_root(lambda z: np.array([1.0, 1.0]), Box.cube(2), tol=1e-6) is None


def test_tol_must_be_positive():
    with pytest.raises(ValueError):
        miranda_root(lambda z: z, Box.cube(2), tol=0)


def test_affine_soundness():
    rng = np.random.default_rng(9)
    for _ in range(10):
        k = int(rng.integers(1, 4))
        A = diag_dominant(rng, k)
        root = rng.uniform(-0.8, 0.8, k)
        b = -A @ root
        found = miranda_root(lambda x: A @ x + b, Box.cube(k), tol=1e-6, max_depth=30 * k)
        assert found is not None
        box, cert = found
        assert box.width <= 1e-6 and cert.certified
        assert box.contains(np.linalg.solve(A, -b), slack=1e-12)


def test_refinement_monotone_on_affine_family():
    rng = np.random.default_rng(3)
    for _ in range(20):
        k = int(rng.integers(1, 4))
        A = diag_dominant(rng, k)
        A = A / np.abs(np.diag(A))[:, None]
        b = rng.uniform(-0.2, 0.2, k)
        g = lambda x: A @ x + b
        if check_faces(g, Box.cube(k), grid=5).certified:
            assert check_faces(g, Box.cube(k), grid=10).certified


def test_certificate_json_shape():
    cert = check_faces(lambda x: x, Box.cube(2), grid=5)
    d = cert.to_dict()
    assert d["verdict"] == "certified" and d["grid_density"] == 5
    assert len(d["conditions"]) == 4
    assert Box.from_dict(d["box"]).to_dict() == d["box"]
