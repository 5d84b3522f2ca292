"""Sampled Poincaré–Miranda certificates and subdivision localisation of zeros.

A continuous ``g: box -> R^k`` has a zero in the box when, for every axis
``i``, the component ``g_i`` is ``>= 0`` on one facet orthogonal to axis ``i``
and ``<= 0`` on the opposite one.  Here the facets are sampled on a regular
lattice, so a certificate records how densely it looked and the smallest
sign-adjusted value it saw.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

import numpy as np

DEFAULT_GRID = 17
DEFAULT_MAX_DEPTH = 60


class EvaluationError(ValueError):
    """``g`` returned a non-finite value; ``node`` is where it happened."""

    def __init__(self, node):
        self.node = np.asarray(node, dtype=float)
        super().__init__(f"non-finite value of g at {self.node.tolist()}")


@dataclass(frozen=True, eq=False)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("box bounds must be vectors of equal length")
        if np.any(lo > hi):
            raise ValueError("box lower bound exceeds upper bound")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, k: int, half: float = 1.0, center=None) -> "Box":
        c = np.zeros(k) if center is None else np.asarray(center, dtype=float)
        return cls(c - half, c + half)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> float:
        return float(np.max(self.upper - self.lower))

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def contains(self, x, slack: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - slack) and np.all(x <= self.upper + slack))

    def split(self, axis: int | None = None) -> tuple["Box", "Box"]:
        if axis is None:
            axis = int(np.argmax(self.upper - self.lower))
        mid = 0.5 * (self.lower[axis] + self.upper[axis])
        hi1 = self.upper.copy()
        hi1[axis] = mid
        lo2 = self.lower.copy()
        lo2[axis] = mid
        return Box(self.lower, hi1), Box(lo2, self.upper)

    def lattice(self, grid: int) -> np.ndarray:
        axes = [np.linspace(a, b, grid) for a, b in zip(self.lower, self.upper)]
        return np.array(list(itertools.product(*axes)))

    def facet_lattice(self, axis: int, side: int, grid: int) -> np.ndarray:
        """Nodes of the facet ``x_axis = upper`` (side +1) or ``= lower`` (side -1)."""
        value = self.upper[axis] if side > 0 else self.lower[axis]
        axes = [np.linspace(a, b, grid) for j, (a, b) in enumerate(zip(self.lower, self.upper)) if j != axis]
        rest = np.array(list(itertools.product(*axes))) if axes else np.zeros((1, 0))
        return np.insert(rest, axis, value, axis=1)

    def to_dict(self) -> dict:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Box":
        return cls(d["lower"], d["upper"])

    def __repr__(self):
        return f"Box(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


@dataclass(frozen=True)
class FaceCondition:
    """Sign condition ``sign * g_axis >= 0`` on the facet ``x_axis = lower/upper``.

    ``side`` names the facet (+1 upper, -1 lower); ``sign`` is the required
    sign of ``g_axis`` there after choosing the axis orientation.
    """

    axis: int
    side: int
    sign: int
    satisfied: bool
    min_observed: float
    sample_count: int

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "side": self.side,
            "sign": self.sign,
            "satisfied": self.satisfied,
            "min_observed": self.min_observed,
            "sample_count": self.sample_count,
        }


@dataclass(frozen=True, eq=False)
class MirandaCertificate:
    box: Box
    conditions: tuple[FaceCondition, ...]
    grid_density: int
    verdict: str
    orientation: tuple[int, ...]

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    @property
    def strength(self) -> float:
        """Smallest sign-adjusted facet value seen (negative when not certified)."""
        return min(c.min_observed for c in self.conditions)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "box": self.box.to_dict(),
            "grid_density": self.grid_density,
            "verdict": self.verdict,
            "orientation": list(self.orientation),
            "conditions": [c.to_dict() for c in self.conditions],
        }


def _evaluate(g, nodes: np.ndarray, k: int) -> np.ndarray:
    out = np.empty((len(nodes), k))
    for j, x in enumerate(nodes):
        val = np.asarray(g(x), dtype=float).reshape(-1)
        if val.size != k:
            raise ValueError(f"g returned {val.size} components on a {k}-dimensional box")
        if not np.all(np.isfinite(val)):
            raise EvaluationError(x)
        out[j] = val
    return out


def check_faces(g, box: Box, grid: int = DEFAULT_GRID, noise: float = 0.0) -> MirandaCertificate:
    """Sample the ``2k`` facet conditions of ``g`` on ``box``.

    Each axis may be used in either orientation (``g_i >= 0`` on the upper
    facet, or on the lower one).  The verdict is ``certified`` when every
    axis passes in some orientation, ``refuted`` when some axis fails both
    orientations by more than ``noise``, and ``inconclusive`` otherwise.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    k = box.dim
    conditions, orientation = [], []
    refuted = False
    for i in range(k):
        up = _evaluate(g, box.facet_lattice(i, +1, grid), k)[:, i]
        lo = _evaluate(g, box.facet_lattice(i, -1, grid), k)[:, i]
        # orientation +1: g_i >= 0 on upper, <= 0 on lower; -1 the reverse
        m_pos = (float(np.min(up)), float(np.min(-lo)))
        m_neg = (float(np.min(-up)), float(np.min(lo)))
        o = 1 if min(m_pos) >= min(m_neg) else -1
        mins = m_pos if o == 1 else m_neg
        if min(mins) < -noise:
            refuted = True
        orientation.append(o)
        conditions.append(FaceCondition(i, +1, o, mins[0] >= 0, mins[0], len(up)))
        conditions.append(FaceCondition(i, -1, -o, mins[1] >= 0, mins[1], len(lo)))
    if all(c.satisfied for c in conditions):
        verdict = "certified"
    elif refuted:
        verdict = "refuted"
    else:
        verdict = "inconclusive"
    return MirandaCertificate(box, tuple(conditions), grid, verdict, tuple(orientation))


def _constant_sign(g, box: Box, k: int, grid: int) -> bool:
    vals = _evaluate(g, box.lattice(grid), k)
    return bool(np.any(np.all(vals > 0, axis=0) | np.all(vals < 0, axis=0)))


def _preconditioned(g, box: Box, k: int):
    c = box.center
    h = 0.25 * (box.upper - box.lower)
    J = np.empty((k, k))
    for j in range(k):
        if h[j] == 0:
            return g
        e = np.zeros(k)
        e[j] = h[j]
        J[:, j] = (_evaluate(g, [c + e], k)[0] - _evaluate(g, [c - e], k)[0]) / (2 * h[j])
    if not np.all(np.isfinite(J)) or np.linalg.cond(J) > 1e12:
        return g
    Jinv = np.linalg.inv(J)
    return lambda x: Jinv @ np.asarray(g(x), dtype=float)


def miranda_root(
    g,
    box: Box,
    tol: float,
    max_depth: int = DEFAULT_MAX_DEPTH,
    grid: int = DEFAULT_GRID,
    prune_grid: int = 3,
    max_boxes: int = 100_000,
    precondition: bool = True,
):
    """Localise a zero of ``g`` by bisection, returning ``(box, certificate)`` or ``None``.

    Boxes are visited in (depth, lexicographic path) order, so the answer does
    not depend on evaluation order.  A box is discarded when some component
    keeps a strict sign on a ``prune_grid``-per-axis lattice of it.

    With ``precondition`` the facet test on small boxes is applied to
    ``J^{-1} g`` (``J`` a central-difference Jacobian at the box centre),
    which has the same zeros but near-identity structure, so a zero that is
    not centred in its box can still be certified.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    k = box.dim
    heap = [(0, (), box)]
    seen = 0
    while heap and seen < max_boxes:
        depth, path, b = heapq.heappop(heap)
        seen += 1
        if _constant_sign(g, b, k, prune_grid):
            continue
        if b.width <= tol:
            gb = _preconditioned(g, b, k) if precondition else g
            cert = check_faces(gb, b, grid)
            if cert.certified:
                return b, cert
            continue
        if depth >= max_depth:
            continue
        left, right = b.split()
        heapq.heappush(heap, (depth + 1, path + (0,), left))
        heapq.heappush(heap, (depth + 1, path + (1,), right))
    return None
