"""Strict separability of point sets by hyperplanes, one sign pattern at a time.

Sets ``S_1..S_n`` are *separated* when every sign pattern ``sigma`` admits a
hyperplane with ``S_i`` strictly inside ``H^{sigma(i)}``.  Strictness is made
testable with an explicit margin measured along a unit normal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .geometry import Ball, ConvexSet, Hyperplane, Polytope, ball_cover_points


class UnsupportedConfiguration(ValueError):
    """The number of sets differs from the ambient dimension."""


@dataclass(frozen=True)
class SignPattern:
    """Signs for sets ``1..n``; ``0`` marks an index outside the domain."""

    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (-1, 0, 1) for s in signs):
            raise ValueError("signs must be -1, +1 or 0 (unassigned)")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_mapping(cls, mapping: dict[int, int], n: int) -> "SignPattern":
        if any(not 1 <= i <= n for i in mapping):
            raise ValueError("pattern indices must lie in 1..n")
        return cls(tuple(mapping.get(i, 0) for i in range(1, n + 1)))

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, s in enumerate(self.signs) if s)

    @property
    def is_total(self) -> bool:
        return all(self.signs)

    def __neg__(self) -> "SignPattern":
        return SignPattern(tuple(-s for s in self.signs))

    def __str__(self):
        return "(" + ",".join({1: "+", -1: "-", 0: "."}[s] for s in self.signs) + ")"


def patterns(n: int):
    """The ``2^(n-1)`` total patterns with ``sigma(1) = +1``, in a fixed order."""
    for rest in itertools.product((1, -1), repeat=n - 1):
        yield SignPattern((1,) + rest)


# ---------------------------------------------------------------------------
# point sets


def as_point_set(obj, refinement: int | None = None) -> np.ndarray:
    """Finite point set whose hull contains ``obj``.

    Arrays pass through; balls are replaced by inflated polygons/polytopes;
    polytopes contribute their vertices; measures their support points.
    """
    if isinstance(obj, Ball):
        return ball_cover_points(obj.center, obj.radius, refinement)
    if isinstance(obj, Polytope):
        return np.array(obj.vertices, dtype=float)
    if hasattr(obj, "support_points"):
        return np.asarray(obj.support_points(), dtype=float)
    pts = np.asarray(obj, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("point set must be a non-empty (k, n) array")
    return pts


def _validate(sets) -> list[np.ndarray]:
    if len(sets) == 0:
        raise ValueError("empty set list")
    out = [as_point_set(s) for s in sets]
    dims = {p.shape[1] for p in out}
    if len(dims) != 1:
        raise ValueError("dimension mismatch between point sets")
    return out


def default_margin(sets) -> float:
    pts = np.vstack(_validate(sets))
    diam = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    return 1e-7 * max(diam, 1.0)


def _max_margin_lp(sets, sigma):
    """Maximise ``t`` s.t. ``sigma_i(<w, x> - lam) >= t``, ``w`` in the unit box."""
    n = sets[0].shape[1]
    rows = []
    for pts, s in zip(sets, sigma.signs):
        if s == 0:
            continue
        # -s<w,x> + s lam + t <= 0
        rows.append(np.hstack([-s * pts, np.full((len(pts), 1), s), np.ones((len(pts), 1))]))
    A = np.vstack(rows)
    c = np.zeros(n + 2)
    c[-1] = -1.0
    bounds = [(-1.0, 1.0)] * n + [(None, None), (None, 1.0)]
    res = optimize.linprog(c, A_ub=A, b_ub=np.zeros(len(A)), bounds=bounds, method="highs")
    if res.status != 0:
        return None, -np.inf
    w, lam, t = res.x[:n], res.x[n], res.x[n + 1]
    return (w, lam), t


def _unit_margin(sets, sigma, w, lam) -> float:
    nw = np.linalg.norm(w)
    if nw == 0:
        return -np.inf
    return min(
        float(np.min(s * (pts @ w - lam))) / nw for pts, s in zip(sets, sigma.signs) if s
    )


def _refine_margin(sets, sigma, w, lam):
    """Euclidean max-margin polish (``|w| <= 1``) started from the LP answer."""
    n = len(w)
    pts = np.vstack([s * np.hstack([p, -np.ones((len(p), 1))]) for p, s in zip(sets, sigma.signs) if s])
    x0 = np.hstack([w / np.linalg.norm(w), lam / np.linalg.norm(w), _unit_margin(sets, sigma, w, lam)])
    cons = [
        {"type": "ineq", "fun": lambda z: pts @ z[: n + 1] - z[-1], "jac": lambda z: np.hstack([pts, -np.ones((len(pts), 1))])},
        {"type": "ineq", "fun": lambda z: 1.0 - z[:n] @ z[:n], "jac": lambda z: np.hstack([-2 * z[:n], 0.0, 0.0])},
    ]
    res = optimize.minimize(lambda z: -z[-1], x0, jac=lambda z: np.hstack([np.zeros(n + 1), -1.0]),
                            constraints=cons, method="SLSQP", options={"maxiter": 500, "ftol": 1e-15})
    return res.x[:n], res.x[n]


def separating_hyperplane(sets, sigma: SignPattern, margin: float | None = None) -> Hyperplane | None:
    """Hyperplane with ``sigma_i (<v, x> - lam) >= margin`` on every point of ``S_i``, or ``None``."""
    sets = _validate(sets)
    if len(sigma.signs) != len(sets):
        raise ValueError("sign pattern length differs from the number of sets")
    if not any(sigma.signs):
        raise ValueError("sign pattern has empty domain")
    if margin is None:
        margin = default_margin(sets)
    if not margin > 0:
        raise ValueError("margin must be positive")
    sol, t = _max_margin_lp(sets, sigma)
    if sol is None or t <= 0:
        return None
    w, lam = sol
    w2, lam2 = _refine_margin(sets, sigma, w, lam)
    if _unit_margin(sets, sigma, w2, lam2) > _unit_margin(sets, sigma, w, lam):
        w, lam = w2, lam2
    if _unit_margin(sets, sigma, w, lam) < margin:
        return None
    nw = float(np.linalg.norm(w))
    return Hyperplane(w / nw, lam / nw)


@dataclass(frozen=True, eq=False)
class SeparabilityReport:
    separable: bool
    margin: float
    witnesses: dict[SignPattern, Hyperplane] = field(default_factory=dict)
    failing_pattern: SignPattern | None = None

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "separable": self.separable,
            "margin": self.margin,
            "witnesses": [
                {"pattern": list(p.signs), "normal": H.normal.tolist(), "offset": H.offset}
                for p, H in self.witnesses.items()
            ],
            "failing_pattern": None if self.failing_pattern is None else list(self.failing_pattern.signs),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SeparabilityReport":
        wit = {SignPattern(tuple(w["pattern"])): Hyperplane(w["normal"], w["offset"]) for w in d["witnesses"]}
        fp = d.get("failing_pattern")
        return cls(bool(d["separable"]), float(d["margin"]), wit, None if fp is None else SignPattern(tuple(fp)))


def check_separable(sets, margin: float | None = None) -> SeparabilityReport:
    """Check all patterns with ``sigma(1) = +1``; the rest follow by negation."""
    sets = _validate(sets)
    n = sets[0].shape[1]
    if len(sets) != n:
        raise UnsupportedConfiguration(f"{len(sets)} sets in R^{n}: separability needs exactly n sets")
    if margin is None:
        margin = default_margin(sets)
    witnesses, failing = {}, None
    for sigma in patterns(n):
        H = separating_hyperplane(sets, sigma, margin)
        if H is None:
            failing = failing or sigma
        else:
            witnesses[sigma] = H
    return SeparabilityReport(failing is None, margin, witnesses, failing)


def hulls_disjoint(a, b) -> bool:
    """``conv(a)`` and ``conv(b)`` are disjoint (planar sets only)."""
    a, b = _validate([a, b])
    if a.shape[1] != 2:
        raise ValueError("hulls_disjoint is defined for planar sets only")
    ka, kb = len(a), len(b)
    # convex weights p, q >= 0 with sum 1 each and a^T p = b^T q
    A_eq = np.zeros((4, ka + kb))
    A_eq[:2, :ka] = a.T
    A_eq[:2, ka:] = -b.T
    A_eq[2, :ka] = 1.0
    A_eq[3, ka:] = 1.0
    b_eq = np.array([0.0, 0.0, 1.0, 1.0])
    res = optimize.linprog(np.zeros(ka + kb), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return res.status == 2


def sets_from_containers(containers: list[ConvexSet], refinement: int | None = None) -> list[np.ndarray]:
    return [as_point_set(S, refinement) for S in containers]
