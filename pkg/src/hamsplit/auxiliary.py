"""Auxiliary functions: offsets with prescribed mass, container points, central spheres.

For a measure ``mu``, a ratio ``alpha`` and a normal ``v`` the set of offsets
``lam`` with ``mu(H+_{v,lam}) = alpha`` is a closed interval (a single point
unless the density vanishes on a slab).  :func:`solve_lambda` brackets both
ends of that interval and picks its midpoint.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .geometry import UNIT_TOL, ConvexSet, Hyperplane, as_vector, perp
from .measures import Measure, mass_of_set

FALLBACK_THRESHOLD = 1e-10


class ContainerError(ValueError):
    """The container set does not carry enough mass for the requested ratio."""


class DegenerateCurveError(ValueError):
    """A sampled curve collapses to a point; its turning number is undefined."""


@dataclass(frozen=True)
class LambdaSolution:
    lambda_min: float
    lambda_max: float
    chosen: float

    @property
    def width(self) -> float:
        return self.lambda_max - self.lambda_min


def _unit_normal(v, dim: int) -> np.ndarray:
    v = as_vector(v, dim)
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise ValueError("normal must be a unit vector")
    return v


def _bisect(pred, good: float, bad: float, tol: float) -> tuple[float, float]:
    """Shrink ``[good, bad]`` (either order) keeping ``pred(good)`` true and ``pred(bad)`` false."""
    for _ in range(400):
        if abs(bad - good) <= tol:
            break
        mid = 0.5 * (good + bad)
        if mid == good or mid == bad:
            break
        if pred(mid):
            good = mid
        else:
            bad = mid
    return good, bad


def solve_lambda(m: Measure, v, alpha: float, tol: float = 1e-12, budget: int = 1) -> LambdaSolution:
    """Offsets ``lam`` achieving ``mu(H+_{v,lam}) = alpha``, bracketed inside the bounding ball."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if not tol > 0:
        raise ValueError("tol must be positive")
    v = _unit_normal(v, m.dim)
    c, r = m.bounding_ball()
    centre = float(c @ v)
    lo, hi = centre - r, centre + r

    def f(lam):
        return m.excess(Hyperplane(v, lam), alpha, budget)

    f_lo, f_hi = f(lo), f(hi)
    half = 0.5 * tol

    if f_lo > 0 and f_hi < 0:
        try:
            root = optimize.brentq(f, lo, hi, xtol=half, rtol=4 * np.finfo(float).eps, maxiter=200)
        except RuntimeError:  # noisy excess near a flat root
            g, b_ = _bisect(lambda x: f(x) > 0, lo, hi, half)
            root = 0.5 * (g + b_)
        left, right = max(lo, root - half), min(hi, root + half)
        f_left, f_right = f(left), f(right)
    else:
        root, left, right, f_left, f_right = None, lo, hi, f_lo, f_hi

    # lambda_min = sup{f > 0}
    if f_lo <= 0:
        a = lo
    elif root is not None and f_left > 0 and f_right <= 0:
        a = 0.5 * (left + right)
    else:
        g, b_ = (left, hi) if (root is not None and f_left > 0) else (lo, hi if root is None else left)
        g, b_ = _bisect(lambda x: f(x) > 0, g, b_, tol)
        a = 0.5 * (g + b_)

    # lambda_max = inf{f < 0}
    if f_hi >= 0:
        b = hi
    elif root is not None and f_right < 0 and f_left >= 0:
        b = 0.5 * (left + right)
    else:
        g, b_ = (right, lo) if (root is not None and f_right < 0) else (hi, lo if root is None else right)
        g, b_ = _bisect(lambda x: f(x) < 0, g, b_, tol)
        b = 0.5 * (g + b_)

    if a > b:  # both ends resolved inside one tolerance window
        a = b = 0.5 * (a + b)
    chosen = 0.5 * (a + b)
    # steep masses: tighten until the mass itself meets tol
    if abs(f(chosen)) > tol and b - a <= tol:
        g, b_ = _bisect(lambda x: f(x) > 0, a - tol, b + tol, 0.0)
        chosen = a = b = 0.5 * (g + b_)
    return LambdaSolution(a, b, chosen)


# ---------------------------------------------------------------------------
# container points


@dataclass(frozen=True, eq=False)
class AuxFunction:
    """Selects, for each normal, a point of a container on an ``alpha``-hyperplane.

    ``mode`` is ``"interval-midpoint"`` (the point of the slice nearest the
    container's centroid) or ``"central-sphere"`` (planar centre of mass of
    the density on the slice).
    """

    measure: Measure
    alpha: float
    container: ConvexSet
    mode: str = "interval-midpoint"
    tol: float = 1e-12
    container_mass: float = field(init=False, default=float("nan"))

    def __post_init__(self):
        if self.mode not in ("interval-midpoint", "central-sphere"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.container.dim != self.measure.dim:
            raise ValueError("container and measure dimensions differ")
        if self.mode == "central-sphere" and self.measure.dim != 2:
            raise ValueError("central spheres are implemented for planar measures only")
        mv = mass_of_set(self.measure, self.container)
        need = max(self.alpha, 1.0 - self.alpha)
        if mv.value + mv.error_bound < need - 1e-12:
            raise ContainerError(f"container mass {mv.value:.6g} is below max(alpha, 1-alpha) = {need:.6g}")
        object.__setattr__(self, "container_mass", mv.value)

    def offset(self, v) -> float:
        return container_offset(self.measure, self.container, self.alpha, v, self.tol)

    def __call__(self, v) -> np.ndarray:
        return aux_point(self, v)


def container_offset(m: Measure, S: ConvexSet, alpha: float, v, tol: float = 1e-12) -> float:
    """Offset of an ``alpha``-hyperplane with normal ``v`` that meets ``S``.

    When the solved plateau misses ``S`` (one closed side contains it) the
    offset slides to the supporting hyperplane of ``S``; otherwise the plateau
    midpoint is kept.
    """
    v = _unit_normal(v, m.dim)
    sol = solve_lambda(m, v, alpha, tol)
    smin, smax = S.support(v)
    lam = min(max(sol.chosen, smin), smax)
    slack = 1e-9 * max(1.0, abs(smin), abs(smax))
    if lam < sol.lambda_min - slack or lam > sol.lambda_max + slack:
        raise ContainerError(
            f"no alpha-hyperplane with normal {v} meets the container "
            f"(plateau [{sol.lambda_min:.6g}, {sol.lambda_max:.6g}], support [{smin:.6g}, {smax:.6g}])"
        )
    return lam


def aux_point(f: AuxFunction, v) -> np.ndarray:
    """Point ``p`` of the container with ``mu(H+_{v,<v,p>}) = alpha``."""
    if f.mode == "central-sphere":
        return central_sphere_point(f.measure, f.container, f.alpha, v, tol=f.tol)
    v = _unit_normal(v, f.measure.dim)
    lam = f.offset(v)
    return f.container.slice_point(v, lam)


def central_sphere_point(m: Measure, S: ConvexSet, alpha: float, v, tol: float = 1e-12) -> np.ndarray:
    return _central_point(m, S, alpha, v, tol)[0]


def _central_point(m, S, alpha, v, tol):
    if m.dim != 2:
        raise ValueError("central spheres are implemented for planar measures only")
    v = _unit_normal(v, 2)
    lam = container_offset(m, S, alpha, v, tol)
    seg = S.slice_interval(v, lam)
    if seg is None:
        raise RuntimeError("alpha-hyperplane misses the container")
    u = perp(v)
    base = lam * v
    m0, m1 = m.line_moments(base, u, seg[0], seg[1])
    if m0 < FALLBACK_THRESHOLD:
        return base + 0.5 * (seg[0] + seg[1]) * u, True
    return base + (m1 / m0) * u, False


# ---------------------------------------------------------------------------
# sampled central spheres


@dataclass(frozen=True, eq=False)
class CurveSample:
    angles: np.ndarray
    points: np.ndarray
    flags: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["angle", "x", "y", "fallback_flag"])
        for a, (x, y), fl in zip(self.angles, self.points, self.flags):
            w.writerow([repr(float(a)), repr(float(x)), repr(float(y)), int(fl)])
        return buf.getvalue()


def sample_central_sphere(m: Measure, S: ConvexSet, alpha: float, grid_size: int, tol: float = 1e-12) -> CurveSample:
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    angles = 2 * np.pi * np.arange(grid_size) / grid_size
    pts = np.empty((grid_size, 2))
    flags = np.zeros(grid_size, dtype=bool)
    for i, a in enumerate(angles):
        v = np.array([math.cos(a), math.sin(a)])
        pts[i], flags[i] = _central_point(m, S, alpha, v, tol)
    return CurveSample(angles, pts, flags)


def turning_number(curve: CurveSample | np.ndarray, tol: float = 1e-9) -> int:
    """Signed number of turns of the discrete tangent of a closed curve.

    A curve whose extent is below ``tol`` (relative to the size of its
    coordinates) counts as a single point.  Consecutive points closer than
    ``tol`` times the extent are merged first.
    """
    pts = np.asarray(curve.points if isinstance(curve, CurveSample) else curve, dtype=float)
    extent = float(np.max(np.ptp(pts, axis=0))) if len(pts) else 0.0
    scale = max(1.0, float(np.max(np.abs(pts)))) if len(pts) else 1.0
    if extent <= tol * scale:
        raise DegenerateCurveError("curve collapses to a point")
    keep = [pts[0]]
    for p in pts[1:]:
        if np.linalg.norm(p - keep[-1]) > tol * extent:
            keep.append(p)
    if np.linalg.norm(keep[-1] - keep[0]) <= tol * extent and len(keep) > 1:
        keep.pop()
    q = np.array(keep)
    if len(q) < 3:
        raise DegenerateCurveError("too few distinct points")
    d = np.roll(q, -1, axis=0) - q
    theta = np.arctan2(d[:, 1], d[:, 0])
    turn = np.angle(np.exp(1j * (np.roll(theta, -1) - theta)))
    return int(round(float(turn.sum()) / (2 * np.pi)))


def whitney_index(m: Measure, S: ConvexSet, alpha: float, grid_size: int = 1440, max_doublings: int = 4):
    """Turning number of the central sphere, doubling the grid until two
    consecutive refinements agree.

    Returns ``(index, grid_size_used)``.
    """
    prev = turning_number(sample_central_sphere(m, S, alpha, grid_size))
    for _ in range(max_doublings):
        grid_size *= 2
        cur = turning_number(sample_central_sphere(m, S, alpha, grid_size))
        if cur == prev:
            return cur, grid_size
        prev = cur
    raise RuntimeError("turning number did not stabilise under grid refinement")


def curve_svg(curve: CurveSample, outline: np.ndarray | None = None, size: int = 400) -> str:
    """Minimal SVG drawing of a sampled curve (and an optional polygon outline)."""
    from .svg import Canvas

    pts = curve.points
    canvas = Canvas.fit(np.vstack([pts] + ([outline] if outline is not None else [])), size)
    if outline is not None:
        canvas.polygon(outline, stroke="#888", fill="none")
    canvas.polyline(np.vstack([pts, pts[:1]]), stroke="#c0392b")
    return canvas.render()
