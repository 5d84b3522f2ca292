import json

import numpy as np
import pytest

from conftest import d_star
from hamsplit.scenarios import (
    NAMES,
    Scenario,
    build,
    concentric_gap,
    discontinuity_probe,
    random_separated_problem,
    run,
    symmetry_defect,
    three_caps_limit_points,
)
from hamsplit.separability import check_separable
from hamsplit.geometry import Ball


def test_build_expected_tags():
    assert build("concentric_discs").expected == {"outcome": "not_solvable"}
    assert build("concentric_discs").problem.dim == 2
    cb = build("collinear_balls")
    assert cb.problem.dim == 3 and cb.expected["outcome"] == "not_solvable"
    assert build("pentagon").expected == {"outcome": "turning_number", "turning_number": 4}
    assert build("pentagon", alpha=0.05).expected["turning_number"] == 1
    assert build("three_caps").expected["outcome"] == "discontinuity"


def test_unknown_name():
    with pytest.raises(KeyError):
        build("hexagon")


@pytest.mark.parametrize("name", NAMES)
def test_json_round_trip(name):
    sc = build(name)
    back = Scenario.from_dict(json.loads(json.dumps(sc.to_dict())))
    assert back.same_as(sc)


def test_random_separated_is_separated():
    for seed in range(5):
        p = random_separated_problem(seed, 3)
        assert check_separable([Ball(m.center, m.radius) for m in p.measures]).separable


def test_concentric_gap_matches_oracle():
    assert concentric_gap() == pytest.approx(d_star(), abs=1e-14)


def test_run_concentric():
    rep = run("concentric_discs")
    assert rep.passed and rep.observed["outcome"] == "not_solvable"
    assert rep.observed["scan_min"] >= d_star() - 1e-4


def test_run_random_separated():
    rep = run("random_separated", seed=7, n=3)
    assert rep.passed and rep.observed["verify"]["passed"]


def test_run_pentagon_small_alpha():
    rep = run("pentagon", alpha=0.05)
    assert rep.passed and rep.observed["turning_number"] == 1


def test_run_collinear():
    rep = run("collinear_balls")
    assert rep.passed and rep.observed["scan_min"] > 10 * 1e-6


def test_three_caps_probe():
    p, q = three_caps_limit_points()
    gaps = []
    for eps in (1e-2, 1e-3, 1e-4):
        pr = discontinuity_probe("three_caps", eps)
        gaps.append(pr.gap)
        assert pr.gap > 1.0
        # tilting by +eps and -eps are mirror images under x -> -x
        assert pr.left == pytest.approx(pr.right * [-1, 1], abs=1e-9)
        assert {tuple(np.round(pr.left, 6)), tuple(np.round(pr.right, 6))} == {tuple(np.round(p, 6)), tuple(np.round(q, 6))}
    assert (max(gaps) - min(gaps)) / max(gaps) < 0.1
    assert run("three_caps").passed


def test_probe_validation():
    with pytest.raises(ValueError):
        discontinuity_probe("three_caps", 0.5)
    with pytest.raises(ValueError):
        discontinuity_probe(build("pentagon"), 1e-3)


def test_symmetry_defect():
    a = 2 * np.pi * np.arange(10) / 10
    ring = np.column_stack([np.cos(a), np.sin(a)])
    assert symmetry_defect(ring, 5) <= 1e-12
    bumped = ring.copy()
    bumped[0] += [0.1, 0.0]
    assert symmetry_defect(bumped, 5) > 0.05
