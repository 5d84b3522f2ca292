"""Oriented hyperplanes, convex containers and small planar helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import optimize, spatial, stats

UNIT_TOL = 1e-12


def as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {v.shape[0]}")
    return v


def unit(v) -> np.ndarray:
    v = as_vector(v)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("zero vector has no direction")
    return v / norm


def perp(v: np.ndarray) -> np.ndarray:
    """Rotate a planar vector by +90 degrees."""
    return np.array([-v[1], v[0]])


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """The oriented hyperplane ``<x, normal> = offset``.

    The positive side is the closed half-space ``<x, normal> >= offset``,
    the negative side ``<x, normal> <= offset``.
    """

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        v = as_vector(self.normal).copy()
        if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
            raise ValueError(f"hyperplane normal must be a unit vector (norm={np.linalg.norm(v)!r})")
        if not math.isfinite(self.offset):
            raise ValueError("hyperplane offset must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "normal", v)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_normal(cls, normal, offset: float) -> "Hyperplane":
        """Build from any nonzero normal, rescaling the offset with it."""
        v = as_vector(normal)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValueError("zero normal")
        return cls(v / norm, offset / norm)

    @classmethod
    def through(cls, point, normal) -> "Hyperplane":
        v = unit(normal)
        return cls(v, float(np.dot(as_vector(point, v.size), v)))

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def __neg__(self) -> "Hyperplane":
        return Hyperplane(-self.normal, -self.offset)

    def side(self, sign: int) -> "Hyperplane":
        """Hyperplane whose positive side is this one's ``sign`` side."""
        if sign not in (1, -1):
            raise ValueError("side must be +1 or -1")
        return self if sign == 1 else -self

    def signed_distance(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.normal - self.offset

    def point(self) -> np.ndarray:
        return self.offset * self.normal

    def to_dict(self) -> dict:
        return {"normal": [float(c) for c in self.normal], "offset": self.offset}

    @classmethod
    def from_dict(cls, d: dict) -> "Hyperplane":
        return cls(d["normal"], d["offset"])

    def __repr__(self):
        coords = ", ".join(f"{c:.6g}" for c in self.normal)
        return f"Hyperplane(normal=[{coords}], offset={self.offset:.6g})"


# ---------------------------------------------------------------------------
# planar polygons


def polygon_area(poly: np.ndarray) -> float:
    """Signed shoelace area (positive for counter-clockwise order)."""
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_centroid(poly: np.ndarray) -> np.ndarray:
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = cross.sum() / 2.0
    return np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6.0 * a)


def clip_halfplane(poly: np.ndarray, normal, offset: float) -> np.ndarray:
    """Clip a convex polygon to ``<x, normal> >= offset`` (Sutherland-Hodgman)."""
    if len(poly) == 0:
        return poly
    d = poly @ np.asarray(normal, dtype=float) - offset
    out = []
    n = len(poly)
    for i in range(n):
        j = (i + 1) % n
        p, q = poly[i], poly[j]
        dp, dq = d[i], d[j]
        if dp >= 0:
            out.append(p)
        if (dp >= 0) != (dq >= 0):
            t = dp / (dp - dq)
            out.append(p + t * (q - p))
    return np.array(out).reshape(-1, 2)


def convex_order(points: np.ndarray) -> np.ndarray:
    """Counter-clockwise hull vertices of planar points."""
    hull = spatial.ConvexHull(points)
    return points[hull.vertices]


def _disc_triangle_area(a: np.ndarray, b: np.ndarray, r: float) -> float:
    """Signed area of disc(0, r) intersected with triangle (0, a, b)."""
    # Split the edge a->b at its circle crossings; straight pieces inside the
    # disc contribute triangle area, pieces outside contribute a sector.
    d = b - a
    A = d @ d
    if A == 0:
        return 0.0
    B = a @ d
    C = a @ a - r * r
    disc = B * B - A * C
    ts = [0.0]
    if disc > 0:
        s = math.sqrt(disc)
        for t in ((-B - s) / A, (-B + s) / A):
            if 0.0 < t < 1.0:
                ts.append(t)
    ts.append(1.0)
    total = 0.0
    for t0, t1 in zip(ts[:-1], ts[1:]):
        p, q = a + t0 * d, a + t1 * d
        mid = a + 0.5 * (t0 + t1) * d
        if mid @ mid <= r * r:
            total += 0.5 * (p[0] * q[1] - p[1] * q[0])
        else:
            ang = math.atan2(p[0] * q[1] - p[1] * q[0], p @ q)
            total += 0.5 * r * r * ang
    return total


def disc_polygon_area(center, radius: float, poly: np.ndarray) -> float:
    """Exact area of a disc intersected with a convex polygon (any orientation)."""
    if len(poly) < 3:
        return 0.0
    c = np.asarray(center, dtype=float)
    q = poly - c
    total = 0.0
    for i in range(len(q)):
        total += _disc_triangle_area(q[i], q[(i + 1) % len(q)], radius)
    return abs(total)


def square_around(center, half_width: float) -> np.ndarray:
    cx, cy = center
    h = half_width
    return np.array([[cx - h, cy - h], [cx + h, cy - h], [cx + h, cy + h], [cx - h, cy + h]])


# ---------------------------------------------------------------------------
# convex containers


class ConvexSet:
    """Compact convex set used as a container for auxiliary points."""

    dim: int

    def contains(self, x, tol: float = 1e-9) -> bool:
        raise NotImplementedError

    def support(self, v) -> tuple[float, float]:
        """Return ``(min, max)`` of ``<x, v>`` over the set."""
        raise NotImplementedError

    @property
    def centroid(self) -> np.ndarray:
        raise NotImplementedError

    def slice_point(self, v, offset: float, target=None) -> np.ndarray:
        """Point of the set on ``<x, v> = offset`` closest to ``target``.

        ``target`` defaults to the centroid of the set.
        """
        raise NotImplementedError

    def slice_interval(self, v, offset: float) -> tuple[float, float] | None:
        """Planar sets only: parameter range of ``offset*v + t*perp(v)`` inside the set."""
        raise NotImplementedError

    def boundary_points(self, refinement: int | None = None) -> np.ndarray:
        """Finite point set whose convex hull contains this set."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def transformed(self, R, t) -> "ConvexSet":
        """Image under ``x -> R x + t``."""
        raise NotImplementedError

    @staticmethod
    def from_dict(d: dict) -> "ConvexSet":
        kind = d.get("type")
        if kind == "ball":
            return Ball(d["center"], d["radius"])
        if kind == "polytope":
            return Polytope(d["vertices"])
        raise ValueError(f"unknown convex set type {kind!r}")


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_vector(self.center).copy()
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def contains(self, x, tol=1e-9):
        return bool(np.linalg.norm(as_vector(x) - self.center) <= self.radius * (1 + tol) + tol)

    def support(self, v):
        m = float(np.dot(self.center, v))
        return m - self.radius, m + self.radius

    @property
    def centroid(self):
        return self.center

    def slice_point(self, v, offset, target=None):
        v = as_vector(v, self.dim)
        g = self.center if target is None else as_vector(target, self.dim)
        p = g - (g @ v - offset) * v
        # project back into the disc of the slice if the target's foot lies outside
        foot = self.center - (self.center @ v - offset) * v
        rad2 = self.radius**2 - (self.center @ v - offset) ** 2
        if rad2 < 0:
            raise ValueError("hyperplane misses the ball")
        w = p - foot
        nw = np.linalg.norm(w)
        rs = math.sqrt(rad2)
        if nw > rs:
            p = foot + w * (rs / nw)
        return p

    def slice_interval(self, v, offset):
        v = as_vector(v, 2)
        d = float(self.center @ v) - offset
        h2 = (self.radius - d) * (self.radius + d)
        if h2 < 0:
            return None
        tc = float(self.center @ perp(v))
        h = math.sqrt(h2)
        return tc - h, tc + h

    def boundary_points(self, refinement=None):
        return ball_cover_points(self.center, self.radius, refinement)

    def to_dict(self):
        return {"type": "ball", "center": [float(c) for c in self.center], "radius": self.radius}

    def transformed(self, R, t) -> "Ball":
        return Ball(np.asarray(R) @ self.center + t, self.radius)


class Polytope(ConvexSet):
    """Convex hull of a finite vertex list (dimension >= 1)."""

    def __init__(self, vertices):
        pts = np.asarray(vertices, dtype=float)
        if pts.ndim != 2 or len(pts) == 0:
            raise ValueError("polytope needs a nonempty (k, n) vertex array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("polytope vertices must be finite")
        self.dim = pts.shape[1]
        if self.dim == 1:
            self.vertices = np.array([[pts.min()], [pts.max()]])
            self.equations = np.array([[-1.0, pts.min()], [1.0, -pts.max()]])
        else:
            hull = spatial.ConvexHull(pts)
            self.vertices = pts[hull.vertices]
            self.equations = hull.equations
            self.volume = hull.volume
        self.vertices.setflags(write=False)

    @classmethod
    def from_halfspace(cls, H: Hyperplane, center, radius: float) -> "Polytope":
        """Positive side of ``H`` cut down to the cube of half-width ``radius``."""
        c = as_vector(center, H.dim)
        n = H.dim
        corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * n, indexing="ij")).reshape(n, -1).T
        cube = c + radius * corners
        if n == 2:
            poly = clip_halfplane(convex_order(cube), H.normal, H.offset)
            if len(poly) < 3 or abs(polygon_area(poly)) == 0:
                raise ValueError("half-space misses the bounding cube")
            return cls(poly)
        # vertices of cube ∩ H+ : kept corners plus edge crossings
        d = cube @ H.normal - H.offset
        pts = [p for p, di in zip(cube, d) if di >= 0]
        for i in range(len(cube)):
            for j in range(i + 1, len(cube)):
                if np.count_nonzero(corners[i] != corners[j]) == 1 and (d[i] >= 0) != (d[j] >= 0):
                    t = d[i] / (d[i] - d[j])
                    pts.append(cube[i] + t * (cube[j] - cube[i]))
        return cls(np.array(pts))

    def contains(self, x, tol=1e-9):
        x = as_vector(x, self.dim)
        return bool(np.all(self.equations[:, :-1] @ x + self.equations[:, -1] <= tol))

    def support(self, v):
        p = self.vertices @ as_vector(v, self.dim)
        return float(p.min()), float(p.max())

    @cached_property
    def centroid(self):
        if self.dim == 1:
            return self.vertices.mean(axis=0)
        if self.dim == 2:
            return polygon_centroid(self.vertices)
        tri = spatial.Delaunay(self.vertices)
        simplices = self.vertices[tri.simplices]
        vols = np.abs(np.linalg.det(simplices[:, 1:] - simplices[:, :1])) / math.factorial(self.dim)
        cents = simplices.mean(axis=1)
        return (vols[:, None] * cents).sum(axis=0) / vols.sum()

    def slice_interval(self, v, offset):
        v = as_vector(v, 2)
        u = perp(v)
        p = offset * v
        A, b = self.equations[:, :-1], self.equations[:, -1]
        # A (p + t u) + b <= 0
        au = A @ u
        rhs = -(A @ p + b)
        lo, hi = -math.inf, math.inf
        for a_i, r_i in zip(au, rhs):
            if abs(a_i) < 1e-15:
                if r_i < -1e-12:
                    return None
                continue
            t = r_i / a_i
            if a_i > 0:
                hi = min(hi, t)
            else:
                lo = max(lo, t)
        if lo > hi:
            return None
        return lo, hi

    def slice_point(self, v, offset, target=None):
        v = as_vector(v, self.dim)
        g = self.centroid if target is None else as_vector(target, self.dim)
        if self.dim == 1:
            return np.array([offset * v[0]])
        if self.dim == 2:
            seg = self.slice_interval(v, offset)
            if seg is None:
                raise ValueError("hyperplane misses the polytope")
            u = perp(v)
            t = min(max(float(g @ u), seg[0]), seg[1])
            return offset * v + t * u
        A, b = self.equations[:, :-1], self.equations[:, -1]
        x0 = g - (g @ v - offset) * v
        cons = [
            {"type": "eq", "fun": lambda x: x @ v - offset, "jac": lambda x: v},
            {"type": "ineq", "fun": lambda x: -(A @ x + b), "jac": lambda x: -A},
        ]
        res = optimize.minimize(
            lambda x: 0.5 * np.sum((x - g) ** 2),
            x0,
            jac=lambda x: x - g,
            constraints=cons,
            method="SLSQP",
            options={"ftol": 1e-14, "maxiter": 200},
        )
        x = res.x
        if np.max(A @ x + b) > 1e-7 or abs(x @ v - offset) > 1e-7:
            raise ValueError("hyperplane misses the polytope")
        return x

    def boundary_points(self, refinement=None):
        return np.array(self.vertices)

    def to_dict(self):
        return {"type": "polytope", "vertices": self.vertices.tolist()}

    def transformed(self, R, t) -> "Polytope":
        return Polytope(self.vertices @ np.asarray(R).T + t)


def ball_cover_points(center, radius: float, refinement: int | None = None) -> np.ndarray:
    """Points whose convex hull contains the closed ball.

    Boundary samples are pushed outward by the sag of the approximation so the
    hull circumscribes the ball.
    """
    c = as_vector(center)
    n = c.size
    if n == 1:
        return np.array([[c[0] - radius], [c[0] + radius]])
    if n == 2:
        m = refinement or 64
        ang = 2 * np.pi * np.arange(m) / m
        r = radius / math.cos(math.pi / m)
        return c + r * np.column_stack([np.cos(ang), np.sin(ang)])
    m = refinement or (256 if n == 3 else 64 * n)
    dirs = sphere_lattice(n, m)
    hull = spatial.ConvexHull(dirs)
    # hull facets of unit-sphere points sit at distance -offset from the origin
    inner = float(np.min(-hull.equations[:, -1]))
    return c + (radius / inner) * dirs


# ---------------------------------------------------------------------------
# deterministic direction sets


def sphere_lattice(n: int, count: int) -> np.ndarray:
    """Deterministic, well-spread unit vectors in R^n."""
    if count < 1:
        raise ValueError("count must be positive")
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        ang = 2 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if n == 3:
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / count
        phi = np.pi * (1 + 5**0.5) * k
        rho = np.sqrt(1 - z * z)
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    halton = stats.qmc.Halton(d=n, scramble=False)
    halton.fast_forward(1)
    u = halton.random(count)
    g = stats.norm.ppf(u)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def tangent_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as columns) of the complement of unit ``v``."""
    n = v.size
    q, _ = np.linalg.qr(np.column_stack([v, np.eye(n)]))
    basis = q[:, 1:n]
    # fix signs deterministically
    for j in range(basis.shape[1]):
        k = np.argmax(np.abs(basis[:, j]))
        if basis[k, j] < 0:
            basis[:, j] = -basis[:, j]
    return basis


def rotation_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random proper rotation of R^n."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
