"""Four-part partitions of a planar measure by two lines.

The first line ``H2`` (normal ``v``) splits off mass ``alpha_1 + alpha_2``.
The two sides, renormalised, become two measures, and a single line ``H1``
splitting both with the right ratios finishes the partition.  That second
step is a two-measure splitting problem whose containers are parallel
half-planes pushed slightly away from ``H2``, which are always separated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .auxiliary import solve_lambda
from .geometry import Hyperplane, Polytope, as_vector
from .measures import MassValue, Measure, _clip01, measure_from_dict
from .solver import NotFound, Problem, SplitConfig, SplitResult, find_split

PARTITION_GRID = 64


class PartitionError(RuntimeError):
    """The second line could not be found; ``evidence`` holds the solver output."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class ConditionalMeasure(Measure):
    """``A -> mu(A ∩ G) / mu(G)`` for a closed half-plane ``G``."""

    kind = "conditional"

    def __init__(self, base: Measure, H: Hyperplane, side: int = 1):
        if side not in (1, -1):
            raise ValueError("side must be +1 or -1")
        if base.dim != 2:
            raise ValueError("conditional measures are implemented for planar measures")
        self.base = base
        self.H = H
        self.side = side
        self.G = H if side == 1 else -H
        self.dim = 2
        self.is_analytic = base.is_analytic
        self.has_sampler = base.has_sampler
        mv = base.mass(self.G)
        if not mv.value > 1e-14:
            raise ValueError("conditioning half-plane has zero mass")
        self.base_mass = mv.value
        self.normalizer = 1.0 / mv.value

    def _tails(self, H, budget=1):
        up = self.base.mass_wedge(H, self.G)
        lo = self.base.mass_wedge(-H, self.G)
        err = (up.error_bound + lo.error_bound) * self.normalizer
        return _clip01(up.value * self.normalizer), _clip01(lo.value * self.normalizer), err

    def bounding_ball(self):
        return self.base.bounding_ball()

    def density(self, x):
        x = np.asarray(x, dtype=float)
        inside = x @ self.G.normal >= self.G.offset
        val = np.where(inside, self.base.density(x) * self.normalizer, 0.0)
        return val if x.ndim > 1 else float(val)

    def sample(self, rng, size):
        out, have = [], 0
        while have < size:
            batch = max(1024, int(1.2 * (size - have) * self.normalizer))
            x = self.base.sample(rng, batch)
            x = x[x @ self.G.normal >= self.G.offset]
            out.append(x)
            have += len(x)
        return np.concatenate(out)[:size]

    def line_moments(self, p, u, t0=-math.inf, t1=math.inf):
        p, u = np.asarray(p, float), np.asarray(u, float)
        a = float(p @ self.G.normal) - self.G.offset
        b = float(u @ self.G.normal)
        if abs(b) < 1e-15:
            if a < 0:
                return 0.0, 0.0
        elif b > 0:
            t0 = max(t0, -a / b)
        else:
            t1 = min(t1, -a / b)
        if t0 >= t1:
            return 0.0, 0.0
        m0, m1 = self.base.line_moments(p, u, t0, t1)
        return m0 * self.normalizer, m1 * self.normalizer

    def transformed(self, R, t):
        R = np.asarray(R, dtype=float)
        n = R @ self.H.normal
        return ConditionalMeasure(self.base.transformed(R, t), Hyperplane(n, self.H.offset + float(n @ t)), self.side)

    def to_dict(self):
        return {"type": self.kind, "base": self.base.to_dict(), "hyperplane": self.H.to_dict(), "side": self.side}

    def __repr__(self):
        return f"ConditionalMeasure({self.base!r}, {self.H!r}, side={self.side})"


def conditional(m: Measure, H: Hyperplane, side: int = 1) -> ConditionalMeasure:
    return ConditionalMeasure(m, H, side)


@dataclass(frozen=True, eq=False)
class QuadPartition:
    H1: Hyperplane
    H2: Hyperplane
    quadrant_masses: tuple[float, float, float, float]
    alphas: tuple[float, float, float, float]
    split: SplitResult

    @property
    def residual_norm(self) -> float:
        return max(abs(q - a) for q, a in zip(self.quadrant_masses, self.alphas))

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "H1": self.H1.to_dict(),
            "H2": self.H2.to_dict(),
            "quadrant_order": ["H1+ H2+", "H1- H2+", "H1+ H2-", "H1- H2-"],
            "quadrant_masses": list(self.quadrant_masses),
            "alphas": list(self.alphas),
            "residual_norm": self.residual_norm,
        }


def quadrant_masses(m: Measure, H1: Hyperplane, H2: Hyperplane) -> tuple[MassValue, ...]:
    """Masses in the order ``(H1+H2+, H1-H2+, H1+H2-, H1-H2-)``."""
    return (m.mass_wedge(H1, H2), m.mass_wedge(-H1, H2), m.mass_wedge(H1, -H2), m.mass_wedge(-H1, -H2))


def _container(m: ConditionalMeasure, v: np.ndarray, keep: float, side: int, bound: tuple[np.ndarray, float]):
    """Half-plane ``{side*<x,v> >= side*lam}`` carrying ``keep`` of ``m``, clipped to a box."""
    # mu(H+_{v,lam}) = keep on the + side, = 1 - keep on the - side
    sol = solve_lambda(m, v, keep if side == 1 else 1.0 - keep)
    lam = sol.chosen
    H = Hyperplane(v, lam) if side == 1 else Hyperplane(-v, -lam)
    c, r = bound
    return lam, H, Polytope.from_halfspace(H, c, 1.5 * r + 1.0)


def two_line_partition(m: Measure, alphas, v=(0.0, 1.0), config: SplitConfig | None = None) -> QuadPartition:
    """Two lines cutting ``m`` into quadrants of masses ``alphas``.

    ``H2`` has normal ``v``; the quadrant order is ``(H1+H2+, H1-H2+, H1+H2-, H1-H2-)``.
    """
    if m.dim != 2:
        raise ValueError("two-line partitions are implemented for planar measures")
    alphas = tuple(float(a) for a in alphas)
    if len(alphas) != 4 or any(not a > 0 for a in alphas):
        raise ValueError("need four positive alphas")
    if abs(math.fsum(alphas) - 1.0) > 1e-12:
        raise ValueError("alphas must sum to 1")
    v = as_vector(v, 2)
    v = v / np.linalg.norm(v)
    config = config or SplitConfig(grid=PARTITION_GRID)
    tol = config.tolerance(Problem((m, m), (0.5, 0.5)))

    a12 = alphas[0] + alphas[1]
    lam = solve_lambda(m, v, a12).chosen
    H2 = Hyperplane(v, lam)
    got = m.mass(H2).value
    if abs(got - a12) > tol:
        raise PartitionError(f"first line carries {got:.9g} instead of {a12:.9g}")

    mu1, mu2 = conditional(m, H2, +1), conditional(m, H2, -1)
    beta1 = alphas[0] / a12
    beta2 = alphas[2] / (alphas[2] + alphas[3])
    bound = m.bounding_ball()
    need1, need2 = max(beta1, 1 - beta1), max(beta2, 1 - beta2)
    keep1 = need1 + min(1e-3, 0.5 * (1 - need1))
    keep2 = need2 + min(1e-3, 0.5 * (1 - need2))
    lam1, G1, S1 = _container(mu1, v, keep1, +1, bound)
    lam2, G2, S2 = _container(mu2, v, keep2, -1, bound)
    if not (lam1 > lam > lam2):
        raise PartitionError(f"container offsets not strictly ordered: {lam2:.9g} < {lam:.9g} < {lam1:.9g} fails")
    c1, c2 = mu1.mass(G1).value, mu2.mass(G2).value
    if not (c1 > need1 and c2 > need2):
        raise PartitionError("containers do not carry enough conditional mass")

    problem = Problem((mu1, mu2), (beta1, beta2), separators=(S1, S2))
    res = find_split(problem, config)
    if isinstance(res, NotFound):
        raise PartitionError("no common line for the two conditional measures", res)
    H1 = res.hyperplane
    q = tuple(x.value for x in quadrant_masses(m, H1, H2))
    return QuadPartition(H1, H2, q, alphas, res)


def partition_problem_from_dict(d: dict):
    """``(measure, alphas, v)`` from a two-line partition JSON document."""
    return measure_from_dict(d["measure"]), tuple(d["alphas"]), tuple(d.get("v", (0.0, 1.0)))


__all__ = [
    "ConditionalMeasure",
    "PartitionError",
    "QuadPartition",
    "conditional",
    "quadrant_masses",
    "two_line_partition",
    "partition_problem_from_dict",
]
