import itertools

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from hamsplit.geometry import Ball
from hamsplit.separability import (
    SeparabilityReport,
    SignPattern,
    UnsupportedConfiguration,
    as_point_set,
    check_separable,
    hulls_disjoint,
    patterns,
    separating_hyperplane,
)


def disc(c, r=1.0):
    return as_point_set(Ball(np.asarray(c, float), r))


def assert_witness(sets, sigma, H, margin):
    for s, pts in zip(sigma.signs, sets):
        pts = as_point_set(pts)
        assert np.all(s * (pts @ H.normal - H.offset) >= margin / 2)


def test_sign_pattern_basics():
    p = SignPattern.from_mapping({1: 1, 3: -1}, 3)
    assert p.signs == (1, 0, -1) and p.domain == (1, 3) and not p.is_total
    assert (-p).signs == (-1, 0, 1)
    assert [q.signs for q in patterns(3)] == [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]
    with pytest.raises(ValueError):
        SignPattern.from_mapping({4: 1}, 3)


def test_two_discs_examples():
    sets = [disc((-2, 0)), disc((2, 0))]
    H = separating_hyperplane(sets, SignPattern((-1, 1)))
    assert H.normal == pytest.approx([1, 0], abs=1e-6) and abs(H.offset) < 1
    G = separating_hyperplane(sets, SignPattern((1, -1)))
    assert G.normal == pytest.approx([-1, 0], abs=1e-6)
    assert_witness(sets, SignPattern((1, -1)), G, 1e-7)
    assert separating_hyperplane([disc((-0.5, 0)), disc((0.5, 0))], SignPattern((1, -1))) is None


def test_negation_symmetry():
    rng = np.random.default_rng(0)
    for _ in range(20):
        sets = [rng.normal(size=(6, 2)) + rng.normal(scale=3, size=2) for _ in range(2)]
        for sigma in (SignPattern((1, 1)), SignPattern((1, -1))):
            H, G = separating_hyperplane(sets, sigma), separating_hyperplane(sets, -sigma)
            assert (H is None) == (G is None)


def test_three_far_balls_are_separable():
    centres = np.array([[6.0, 0, 0], [0, 6.0, 0], [0, 0, 6.0]])
    sets = [as_point_set(Ball(c, 1.0)) for c in centres]
    rep = check_separable(sets)
    assert rep.separable and len(rep.witnesses) == 4
    for sigma, H in rep.witnesses.items():
        assert_witness(sets, sigma, H, rep.margin)
    # constructive cross-check: the plane through the three centres, shifted
    # off them, handles (+,+,+) with room to spare
    n = np.cross(centres[1] - centres[0], centres[2] - centres[0])
    n /= np.linalg.norm(n)
    assert all(np.all(s @ n - (centres[0] @ n - 1.5) > 0) for s in sets)


def test_collinear_balls_fail_on_middle_pattern():
    sets = [Ball(np.array(c, float), r) for c, r in (((-3, 0, 0), 1), ((0, 0, 0), 2), ((3, 0, 0), 1))]
    rep = check_separable(sets)
    assert not rep.separable
    assert SignPattern((1, -1, 1)) not in rep.witnesses
    # radii 2 and 1 at distance 3 touch, so adjacent pairs fail too; the
    # first failure in pattern order is reported
    assert rep.failing_pattern == next(p for p in patterns(3) if p not in rep.witnesses)


def test_interval_is_separable():
    rep = check_separable([np.array([[0.0], [1.0]])])
    assert rep.separable
    H = rep.witnesses[SignPattern((1,))]
    assert H.normal[0] * 0.0 - H.offset > 0 and H.normal[0] * 1.0 - H.offset > 0


def test_errors():
    with pytest.raises(ValueError):
        separating_hyperplane([], SignPattern(()))
    with pytest.raises(ValueError):
        check_separable([np.zeros((2, 2)), np.zeros((2, 3))])
    with pytest.raises(UnsupportedConfiguration):
        check_separable([disc((0, 0)), disc((3, 0)), disc((6, 0))])
    with pytest.raises(ValueError):
        hulls_disjoint(np.zeros((2, 3)), np.ones((2, 3)))


def test_hulls_disjoint_examples():
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
    assert hulls_disjoint(sq, sq + [3, 0])
    assert not hulls_disjoint(sq, sq)
    assert not hulls_disjoint(np.array([[0, 0], [1, 0], [0, 1]], float), np.array([[1, 0], [2, 0], [2, 1]], float))


def test_report_round_trip():
    rep = check_separable([disc((-2, 0)), disc((2, 0))])
    back = SeparabilityReport.from_dict(rep.to_dict())
    assert back.separable == rep.separable and back.margin == rep.margin
    assert back.to_dict() == rep.to_dict()


# --- properties (also exercised at larger counts by the acceptance suite) ---


def random_pair(rng):
    a = rng.normal(size=(rng.integers(3, 9), 2))
    b = rng.normal(size=(rng.integers(3, 9), 2)) + rng.uniform(-4, 4, size=2)
    return a, b


def test_separable_iff_hulls_disjoint():
    rng = np.random.default_rng(1)
    seen = set()
    for _ in range(40):
        a, b = random_pair(rng)
        sep = check_separable([a, b]).separable
        assert sep == hulls_disjoint(a, b)
        seen.add(sep)
    assert seen == {True, False}


@pytest.mark.parametrize("n", [2, 3])
def test_hull_equivalence(n):
    rng = np.random.default_rng(2 + n)
    for _ in range(10):
        sets = [rng.normal(size=(12, n)) + rng.uniform(-4, 4, size=n) for _ in range(n)]
        hulls = [s[ConvexHull(s).vertices] for s in sets]
        assert check_separable(sets).separable == check_separable(hulls).separable


@pytest.mark.parametrize("n", [2, 3])
def test_singletons_separable_iff_affinely_independent(n):
    rng = np.random.default_rng(10 + n)
    for trial in range(20):
        pts = rng.normal(size=(n, n))
        if trial % 2:  # last point on the affine hull of the others
            w = rng.uniform(-1, 2, size=n - 1)
            w[-1] = 1 - w[:-1].sum()
            pts[-1] = w @ pts[:-1]
        independent = np.linalg.matrix_rank(pts[1:] - pts[0], tol=1e-9) == n - 1
        assert check_separable([p[None, :] for p in pts]).separable == independent
