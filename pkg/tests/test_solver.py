import math

import numpy as np
import pytest

from conftest import d_star, disc_cap
from hamsplit.geometry import Hyperplane, rotation_matrix
from hamsplit.measures import Mixture, SmoothCap, UniformBall, UniformPolytope, mass_halfspace, mass_halfspace_mc
from hamsplit.scenarios import random_separated_problem
from hamsplit.solver import (
    NotFound,
    Problem,
    ProblemError,
    SplitConfig,
    SplitResult,
    certify_split,
    find_split,
    reduced_residual,
    residual_p,
    scan_residual,
    verify_split,
)

SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


def unit(a):
    return np.array([math.cos(a), math.sin(a)])


def concentric():
    return Problem((UniformBall((0, 0), 2), UniformBall((0, 0), 1)), (0.25, 0.25))


def separated_discs(alphas=(0.3, 0.7)):
    return Problem((UniformBall((-3, 0), 1), UniformBall((3, 0), 1)), alphas)


def disc_mass(center, radius, H):
    """Independent cap-fraction oracle for a uniform disc."""
    return disc_cap((H.offset - float(np.asarray(center) @ H.normal)) / radius)


# --- problem validation ------------------------------------------------------


def test_problem_validation():
    with pytest.raises(ProblemError, match="count ≠ dimension"):
        Problem(tuple(UniformBall((i, 0), 1) for i in range(3)), (0.5,) * 3)
    with pytest.raises(ProblemError):
        Problem((UniformBall((0, 0), 1), UniformBall((0, 0), 1)), (0.5, 1.5))
    with pytest.raises(ProblemError):
        Problem((UniformBall((0, 0), 1), UniformBall((0, 0, 0), 1)), (0.5, 0.5))


def test_config_validation():
    with pytest.raises(ValueError):
        SplitConfig(mass_tol=0)
    with pytest.raises(ValueError):
        SplitConfig(grid=4)
    with pytest.raises(ValueError):
        SplitConfig(methods=("magic",))


def test_problem_json_round_trip():
    p = Problem((UniformBall((0, 0), 2), SmoothCap((1, 1), 1)), (0.2, 0.6))
    q = Problem.from_dict(p.to_dict())
    assert q.to_dict() == p.to_dict()


# --- residual maps -----------------------------------------------------------


def test_residual_p_examples():
    p = Problem((UniformBall((0, 0), 2), UniformBall((0, 0), 1)), (0.5, 0.5))
    for a in np.linspace(0, 2 * np.pi, 5):
        assert np.allclose(residual_p(p, unit(a), 0.0), 0.0, atol=1e-15)
    q = Problem((UniformPolytope(SQUARE), UniformBall((4, 0), 1)), (0.25, 0.5))
    assert np.allclose(residual_p(q, E1, 0.75), [0.0, 0.5], atol=1e-14)
    with pytest.raises(ValueError):
        residual_p(q, np.array([1.0, 0.0, 0.0]), 0.0)


def test_residual_p_matches_monte_carlo():
    p = Problem((SmoothCap((0, 0), 1.5), Mixture([UniformBall((2, 0), 1), UniformBall((0, 2), 0.5)])), (0.4, 0.3))
    v, lam = unit(0.7), 0.4
    r = residual_p(p, v, lam)
    for i, (m, a) in enumerate(zip(p.measures, p.alphas)):
        q = mass_halfspace(m, Hyperplane(v, lam))
        s = mass_halfspace_mc(m, Hyperplane(v, lam), 10**6, seed=i)
        assert abs(r[i] + a - s.value) <= q.error_bound + s.error_bound


def test_reduced_residual_translates():
    p = Problem((UniformBall((-1, 0), 1), UniformBall((2, 0), 1)), (0.3, 0.3))
    assert np.allclose(reduced_residual(p, E2), 0.0, atol=1e-12)
    assert np.allclose(reduced_residual(p, -E2), 0.0, atol=1e-12)


def test_reduced_residual_concentric_gap():
    p = concentric()
    for a in np.linspace(0, 2 * np.pi, 11):
        assert reduced_residual(p, unit(a))[0] == pytest.approx(-d_star(), abs=1e-10)


def test_reduced_residual_is_lambda_difference():
    # lambda_i solved independently by bisection on the disc cap formula
    p = Problem((UniformBall((-3, 1), 1), UniformBall((2, 0), 1.5)), (0.2, 0.65))
    for a in np.linspace(0, 2 * np.pi, 13):
        v = unit(a)
        lam = []
        for (c, r), al in zip((((-3, 1), 1), ((2, 0), 1.5)), p.alphas):
            lo, hi = -1.0, 1.0
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                lo, hi = (mid, hi) if disc_cap(mid) > al else (lo, mid)
            lam.append(float(np.asarray(c) @ v) + r * 0.5 * (lo + hi))
        assert reduced_residual(p, v)[0] == pytest.approx(lam[1] - lam[0], abs=1e-10)


def test_ham_sandwich_scan_zero_perpendicular_to_centres():
    p = separated_discs((0.5, 0.5))
    scan = scan_residual(p, 4096)
    assert scan.best_norm <= 1e-12
    assert abs(scan.best_v @ E1) <= 1e-12


def test_scan_resolution_validated():
    with pytest.raises(ValueError):
        scan_residual(concentric(), 4)


# --- find_split ----------------------------------------------------------------


def test_find_split_separated_discs():
    p = separated_discs()
    res = find_split(p)
    assert isinstance(res, SplitResult) and res.residual_norm <= 1e-6
    H = res.hyperplane
    assert disc_mass((-3, 0), 1, H) == pytest.approx(0.3, abs=1e-6)
    assert disc_mass((3, 0), 1, H) == pytest.approx(0.7, abs=1e-6)
    assert res.achieved == tuple(mass_halfspace(m, H).value for m in p.measures)


def test_find_split_concentric_not_found():
    res = find_split(concentric())
    assert isinstance(res, NotFound) and not res.found
    assert res.scan.best_norm >= d_star() * (1 - 1e-6)


def test_symmetric_shared_centre():
    p = Problem((UniformBall((1, 1), 2), SmoothCap((1, 1), 0.5)), (0.5, 0.5))
    res = find_split(p)
    assert res.found
    assert res.hyperplane.signed_distance(np.array([1.0, 1.0])) == pytest.approx(0.0, abs=1e-9)


def test_plateau_rule_flagged():
    # both measures have a plateau for normals along e1
    gap = Mixture([UniformBall((-3, 0), 1), UniformBall((3, 0), 1)])
    p = Problem((gap, Mixture([UniformBall((-3, 0), 0.5), UniformBall((3, 0), 0.5)])), (0.5, 0.5))
    res = find_split(p)
    assert res.found and res.residual_norm <= 1e-12


def test_one_dimensional_problem():
    res = find_split(Problem((UniformBall((1.0,), 1.0),), (0.25,)))
    assert res.found and res.hyperplane.normal[0] * 1.5 == pytest.approx(res.hyperplane.offset)


def test_three_dimensional_instance():
    p = random_separated_problem(7, 3)
    res = find_split(p)
    assert res.found and res.residual_norm <= 1e-6
    assert verify_split(p, res.hyperplane, 1e-6).passed


def test_antipodal_complement():
    for seed in range(50):
        p = random_separated_problem(seed, 2)
        res = find_split(p)
        comp = p.with_alphas(1 - a for a in p.alphas)
        neg = -res.hyperplane
        assert np.max(np.abs(residual_p(comp, neg.normal, neg.offset))) <= 1e-6 + 1e-12
        other = find_split(comp)
        assert other.found


def test_rotation_invariance():
    rng = np.random.default_rng(5)
    for n in (2, 3):
        p = random_separated_problem(11, n)
        R = rotation_matrix(n, rng)
        t = rng.normal(size=n)
        res, rot = find_split(p), find_split(p.transformed(R, t))
        assert rot.found and rot.residual_norm <= max(2 * res.residual_norm, 1e-6)
        # the original solution, moved rigidly, still splits the moved problem
        n_ = R @ res.hyperplane.normal
        moved = Hyperplane(n_ / np.linalg.norm(n_), res.hyperplane.offset + float(n_ @ t))
        assert np.max(np.abs(residual_p(p.transformed(R, t), moved.normal, moved.offset))) <= 2 * res.residual_norm + 1e-12


# --- verification and certification --------------------------------------------


def test_verify_passes_and_detects_displacement():
    p = Problem((SmoothCap((-3, 0), 1), SmoothCap((3, 0.5), 1.2)), (0.3, 0.7))
    res = find_split(p)
    assert res.found
    rep = verify_split(p, res.hyperplane, 1e-3)
    assert rep.passed, rep.failures
    H = res.hyperplane
    moved = Hyperplane(H.normal, H.offset + 0.1)
    bad = verify_split(p, moved, 1e-3)
    assert not bad.passed
    # finite-difference slope of each mass along the normal
    h = 1e-4
    for m, q in zip(p.measures, bad.quadrature):
        slope = (mass_halfspace(m, Hyperplane(H.normal, H.offset + h)).value
                 - mass_halfspace(m, Hyperplane(H.normal, H.offset - h)).value) / (2 * h)
        base = mass_halfspace(m, H).value
        assert q.value - base == pytest.approx(slope * 0.1, rel=0.1)


def test_verify_empty_half_space():
    p = Problem((UniformBall((0, 0), 1), UniformBall((3, 0), 1)), (0.0, 0.0))
    assert verify_split(p, Hyperplane(E1, 10.0), 1e-6).passed


def test_certify_two_disc_ham_sandwich():
    p = separated_discs((0.5, 0.5))
    scan = scan_residual(p, 4096)
    lam = 0.5 * float(scan.best_v @ np.array([-3.0, 0.0]) + scan.best_v @ np.array([3.0, 0.0]))
    H = Hyperplane(scan.best_v, lam)
    cert = certify_split(p, H)
    assert cert is not None and cert.certified
    # the known solution (chart coordinate 0, offset 0) lies in the certified box
    assert cert.box.contains(np.zeros(2), slack=1e-9)


def test_find_split_with_certificate():
    res = find_split(separated_discs(), SplitConfig(certify=True))
    assert res.found and res.certificate is not None and res.certificate.certified
