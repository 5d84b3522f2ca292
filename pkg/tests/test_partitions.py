import math

import numpy as np
import pytest

from conftest import mc_fraction, uniform_disc_samples
from hamsplit.geometry import Hyperplane
from hamsplit.measures import SmoothCap, UniformBall, UniformPolytope, mass_halfspace, mass_halfspace_mc
from hamsplit.partitions import (
    ConditionalMeasure,
    PartitionError,
    conditional,
    quadrant_masses,
    two_line_partition,
)

SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


def unit(a):
    return np.array([math.cos(a), math.sin(a)])


def test_conditional_square():
    c = conditional(UniformPolytope(SQUARE), Hyperplane(E1, 0.5), +1)
    assert mass_halfspace(c, Hyperplane(E1, 0.75)).value == pytest.approx(0.5, abs=1e-14)
    assert c.normalizer == pytest.approx(2.0)


@pytest.mark.parametrize("side", [1, -1])
def test_conditional_disc_is_normalised(side):
    c = conditional(UniformBall((0, 0), 1), Hyperplane(unit(0.3), 0.0), side)
    assert mass_halfspace(c, Hyperplane(E1, -5.0)).value == pytest.approx(1.0, abs=1e-12)
    assert mass_halfspace(c, Hyperplane(E1, 5.0)).value == 0.0


def test_conditional_smooth_cap_against_rejection_sampler():
    base = SmoothCap((0.2, -0.1), 1.0)
    G = Hyperplane(unit(1.1), 0.15)
    c = conditional(base, G, -1)
    rng = np.random.default_rng(8)
    x = base.sample(rng, 2 * 10**6)
    x = x[x @ G.normal <= G.offset]  # own rejection step
    for a, lam in ((0.4, -0.2), (2.5, 0.1), (4.0, 0.5)):
        H = Hyperplane(unit(a), lam)
        q = mass_halfspace(c, H)
        p, band = mc_fraction(int(np.count_nonzero(x @ H.normal >= H.offset)), len(x))
        assert abs(q.value - p) <= band + q.error_bound


def test_conditional_zero_mass_side():
    with pytest.raises(ValueError):
        conditional(UniformBall((0, 0), 1), Hyperplane(E1, 2.0), +1)
    with pytest.raises(ValueError):
        ConditionalMeasure(UniformBall((0, 0), 1), Hyperplane(E1, 0.0), 0)


def test_square_quarters():
    q = two_line_partition(UniformPolytope(SQUARE), (0.25,) * 4)
    assert q.H2.offset == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(q.quadrant_masses, 0.25, atol=1e-9)


def test_square_uneven():
    alphas = (0.1, 0.4, 0.1, 0.4)
    q = two_line_partition(UniformPolytope(SQUARE), alphas)
    assert q.H2.offset == pytest.approx(0.5, abs=1e-12)
    assert q.residual_norm <= 1e-6
    # a vertical line x = 0.1 realises the masses as products of interval lengths
    assert np.allclose(q.quadrant_masses, alphas, atol=1e-6)
    assert sum(q.quadrant_masses) == pytest.approx(1.0, abs=4e-6)


def test_disc_against_quadrant_counts():
    alphas = (0.3, 0.2, 0.3, 0.2)
    q = two_line_partition(UniformBall((0, 0), 1), alphas, v=unit(0.7))
    assert q.residual_norm <= 1e-6
    rng = np.random.default_rng(12)
    x = uniform_disc_samples(rng, 10**7)
    s1 = x @ q.H1.normal >= q.H1.offset
    s2 = x @ q.H2.normal >= q.H2.offset
    for got, mask in zip(q.quadrant_masses, (s1 & s2, ~s1 & s2, s1 & ~s2, ~s1 & ~s2)):
        p, band = mc_fraction(int(np.count_nonzero(mask)), len(x))
        assert abs(got - p) <= band


def test_first_line_carries_top_mass():
    m = UniformBall((1, 2), 1.5)
    q = two_line_partition(m, (0.1, 0.2, 0.3, 0.4))
    assert mass_halfspace(m, q.H2).value == pytest.approx(0.3, abs=1e-9)
    assert [x.value for x in quadrant_masses(m, q.H1, q.H2)] == list(q.quadrant_masses)


def test_invalid_alphas():
    m = UniformBall((0, 0), 1)
    with pytest.raises(ValueError):
        two_line_partition(m, (0.5, 0.5, 0.0, 0.0))
    with pytest.raises(ValueError):
        two_line_partition(m, (0.3, 0.3, 0.3, 0.3))
    with pytest.raises(ValueError):
        two_line_partition(UniformBall((0, 0, 0), 1), (0.25,) * 4)


def test_partition_json():
    q = two_line_partition(UniformPolytope(SQUARE), (0.25,) * 4)
    d = q.to_dict()
    assert d["quadrant_order"][0] == "H1+ H2+" and len(d["quadrant_masses"]) == 4
    assert PartitionError("x", evidence=1).evidence == 1
