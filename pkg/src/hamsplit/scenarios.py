"""Named example configurations with the outcome each one is expected to show.

* ``concentric_discs`` – two concentric uniform discs (radii 2 and 1) with
  ``alpha = (1/4, 1/4)``: no common hyperplane exists.
* ``collinear_balls`` – three uniform balls in R^3 with collinear centres,
  the middle one larger, all ``alpha = 0.1``: no common hyperplane exists.
* ``pentagon`` – uniform measure on a regular pentagon; its central sphere
  winds 4 times at ``alpha = 1/2`` and once at ``alpha = 0.05``.
* ``three_caps`` – three identical smooth-cap discs sharing a tangent line;
  the central sphere jumps across the normal of that line.
* ``random_separated`` – random balls with separated supports; solvable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .auxiliary import _central_point, sample_central_sphere, turning_number
from .geometry import Ball, ConvexSet, Polytope, ball_cover_points
from .measures import Measure, Mixture, SmoothCap, UniformBall, UniformPolytope
from .separability import check_separable
from .solver import NotFound, Problem, SplitConfig, find_split, verify_split

CONCENTRIC_RADII = (2.0, 1.0)
CONCENTRIC_ALPHAS = (0.25, 0.25)
COLLINEAR_CENTERS = ((-3.0, 0.0, 0.0), (0.0, 0.0, 0.0), (3.0, 0.0, 0.0))
COLLINEAR_RADII = (1.0, 2.0, 1.0)
COLLINEAR_ALPHA = 0.1
PENTAGON_ALPHA = 0.5
PENTAGON_GRID = 1440
# The caps touch the line y = 0 alternately from below and above, so that
# tilting the normal either way moves the solving line onto a different pair.
THREE_CAPS_CENTERS = ((-2.5, -1.0), (0.0, 1.0), (2.5, -1.0))
THREE_CAPS_RADIUS = 1.0
THREE_CAPS_EXPONENT = 2.0
THREE_CAPS_ALPHA = 1.0 / 3.0
PROBE_EPSILONS = (1e-2, 1e-3, 1e-4)

NAMES = ("concentric_discs", "collinear_balls", "pentagon", "three_caps", "random_separated")


@dataclass(frozen=True, eq=False)
class Scenario:
    """A named configuration: either a splitting problem or a planar probe."""

    name: str
    kind: str  # "problem" | "central_sphere" | "discontinuity"
    expected: dict
    params: dict
    problem: Problem | None = None
    measure: Measure | None = None
    container: ConvexSet | None = None
    alpha: float | None = None

    def to_dict(self) -> dict:
        return {"schema": 1, "name": self.name, "params": self.params}

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return build(d["name"], **d.get("params", {}))

    def same_as(self, other: "Scenario") -> bool:
        return self.name == other.name and self.params == other.params and self.expected == other.expected


def regular_polygon(k: int, circumradius: float = 1.0, phase: float = math.pi / 2) -> np.ndarray:
    ang = phase + 2 * np.pi * np.arange(k) / k
    return circumradius * np.column_stack([np.cos(ang), np.sin(ang)])


def _concentric() -> Scenario:
    ms = tuple(UniformBall((0.0, 0.0), r) for r in CONCENTRIC_RADII)
    return Scenario(
        "concentric_discs",
        "problem",
        {"outcome": "not_solvable"},
        {},
        problem=Problem(ms, CONCENTRIC_ALPHAS),
    )


def _collinear() -> Scenario:
    ms = tuple(UniformBall(c, r) for c, r in zip(COLLINEAR_CENTERS, COLLINEAR_RADII))
    return Scenario(
        "collinear_balls",
        "problem",
        {"outcome": "not_solvable"},
        {},
        problem=Problem(ms, (COLLINEAR_ALPHA,) * 3),
    )


def _pentagon(alpha: float = PENTAGON_ALPHA) -> Scenario:
    P = regular_polygon(5)
    expected = {0.5: 4, 0.05: 1}.get(float(alpha))
    return Scenario(
        "pentagon",
        "central_sphere",
        {"outcome": "turning_number", "turning_number": expected},
        {"alpha": float(alpha)},
        measure=UniformPolytope(P),
        container=Polytope(P),
        alpha=float(alpha),
    )


def three_caps_measure() -> Mixture:
    return Mixture([SmoothCap(c, THREE_CAPS_RADIUS, THREE_CAPS_EXPONENT) for c in THREE_CAPS_CENTERS])


def three_caps_container() -> Polytope:
    return Polytope(np.vstack([ball_cover_points(c, THREE_CAPS_RADIUS) for c in THREE_CAPS_CENTERS]))


def _three_caps() -> Scenario:
    return Scenario(
        "three_caps",
        "discontinuity",
        {"outcome": "discontinuity"},
        {},
        measure=three_caps_measure(),
        container=three_caps_container(),
        alpha=THREE_CAPS_ALPHA,
    )


def random_separated_problem(seed: int, n: int, max_tries: int = 1000) -> Problem:
    """Uniform balls with random centres and radii whose supports are separated."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        centers = 3.0 * rng.standard_normal((n, n))
        radii = rng.uniform(0.5, 1.5, n)
        alphas = rng.uniform(0.05, 0.95, n)
        balls = [Ball(c, r) for c, r in zip(centers, radii)]
        if check_separable(balls).separable:
            ms = tuple(UniformBall(c, r) for c, r in zip(centers, radii))
            return Problem(ms, tuple(alphas))
    raise RuntimeError("could not draw a separated instance")


def _random_separated(seed: int = 7, n: int = 3) -> Scenario:
    return Scenario(
        "random_separated",
        "problem",
        {"outcome": "solvable"},
        {"seed": int(seed), "n": int(n)},
        problem=random_separated_problem(int(seed), int(n)),
    )


def build(name: str, **params) -> Scenario:
    builders = {
        "concentric_discs": _concentric,
        "collinear_balls": _collinear,
        "pentagon": _pentagon,
        "three_caps": _three_caps,
        "random_separated": _random_separated,
    }
    if name not in builders:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(NAMES)}")
    return builders[name](**params)


# ---------------------------------------------------------------------------
# analytic reference values


def disc_cap_fraction(d: float) -> float:
    """Area fraction of the unit disc beyond distance ``d`` from the centre."""
    d = min(1.0, max(-1.0, d))
    return (math.acos(d) - d * math.sqrt(1 - d * d)) / math.pi


def concentric_gap() -> float:
    """``d*`` with cap fraction 1/4; the two offsets differ by ``d*`` for every normal."""
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if disc_cap_fraction(mid) > CONCENTRIC_ALPHAS[0]:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) * (CONCENTRIC_RADII[0] - CONCENTRIC_RADII[1])


def three_caps_limit_points() -> tuple[np.ndarray, np.ndarray]:
    """Points where tilted solving lines cross the common tangent line.

    Tilting the normal to the left gives lines through the centre of symmetry
    of the left pair of caps, tilting to the right through that of the right
    pair; both lie on ``y = 0``.
    """
    c = np.array(THREE_CAPS_CENTERS)
    return 0.5 * (c[0] + c[1]), 0.5 * (c[1] + c[2])


# ---------------------------------------------------------------------------
# probes and runs


@dataclass(frozen=True)
class ProbeResult:
    epsilon: float
    left: np.ndarray
    right: np.ndarray
    gap: float
    fallback: tuple[bool, bool]

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "gap": self.gap,
            "fallback": list(self.fallback),
        }


def discontinuity_probe(scenario: Scenario | str = "three_caps", epsilon: float = 1e-3) -> ProbeResult:
    """Central sphere at normals tilted by ``±epsilon`` from vertical."""
    if isinstance(scenario, str):
        scenario = build(scenario)
    if scenario.kind != "discontinuity":
        raise ValueError("the discontinuity probe needs the three_caps scenario")
    if not 0 < epsilon < 0.1:
        raise ValueError("epsilon must lie in (0, 0.1)")
    s, c = math.sin(epsilon), math.cos(epsilon)
    left, fl = _central_point(scenario.measure, scenario.container, scenario.alpha, np.array([-s, c]), 1e-12)
    right, fr = _central_point(scenario.measure, scenario.container, scenario.alpha, np.array([s, c]), 1e-12)
    return ProbeResult(epsilon, left, right, float(np.linalg.norm(left - right)), (fl, fr))


def symmetry_defect(points: np.ndarray, k: int) -> float:
    """How far a point cloud is from being invariant under rotation by ``2 pi / k``.

    Returns the largest distance from a rotated point to the nearest original.
    """
    from scipy.spatial import cKDTree

    a = 2 * np.pi / k
    R = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    tree = cKDTree(points)
    d, _ = tree.query(points @ R.T)
    return float(d.max())


@dataclass(frozen=True, eq=False)
class RunReport:
    scenario: str
    expected: dict
    observed: dict
    passed: bool
    artifacts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "scenario": self.scenario,
            "expected": self.expected,
            "observed": self.observed,
            "passed": self.passed,
        }


def run(scenario: Scenario | str, config: SplitConfig | None = None, **params) -> RunReport:
    if isinstance(scenario, str):
        scenario = build(scenario, **params)
    config = config or SplitConfig()
    name, expected = scenario.name, scenario.expected

    if scenario.kind == "problem":
        res = find_split(scenario.problem, config)
        tol = config.tolerance(scenario.problem)
        if isinstance(res, NotFound):
            observed = {"outcome": "not_solvable", "scan_min": res.scan.best_norm, "scan": res.scan.to_dict()}
            artifacts = {"result": res}
        else:
            ver = verify_split(scenario.problem, res.hyperplane, tol)
            outcome = "solvable" if ver.passed else "unverified"
            observed = {"outcome": outcome, "result": res.to_dict(), "verify": ver.to_dict()}
            artifacts = {"result": res, "verify": ver}
        return RunReport(name, expected, observed, observed["outcome"] == expected["outcome"], artifacts)

    if scenario.kind == "central_sphere":
        curve = sample_central_sphere(scenario.measure, scenario.container, scenario.alpha, config.grid or PENTAGON_GRID)
        k = turning_number(curve)
        centroid = scenario.container.centroid
        off = float(np.max(np.linalg.norm(curve.points - centroid, axis=1)))
        observed = {"outcome": "turning_number", "turning_number": abs(k), "signed_turning_number": k,
                    "max_distance_from_centroid": off}
        ok = expected.get("turning_number") is None or abs(k) == expected["turning_number"]
        return RunReport(name, expected, observed, ok, {"curve": curve})

    probes = [discontinuity_probe(scenario, e) for e in PROBE_EPSILONS]
    p, q = three_caps_limit_points()
    ref = float(np.linalg.norm(p - q))
    gaps = [pr.gap for pr in probes]
    observed = {
        "outcome": "discontinuity",
        "probes": [pr.to_dict() for pr in probes],
        "reference_gap": ref,
        "relative_spread": (max(gaps) - min(gaps)) / max(gaps),
    }
    ok = all(g > 1.0 for g in gaps) and observed["relative_spread"] < 0.1
    return RunReport(name, expected, observed, ok, {"probes": probes})


__all__ = [
    "NAMES",
    "ProbeResult",
    "RunReport",
    "Scenario",
    "build",
    "concentric_gap",
    "discontinuity_probe",
    "regular_polygon",
    "run",
    "symmetry_defect",
    "three_caps_limit_points",
    "random_separated_problem",
]
