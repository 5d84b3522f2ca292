"""Probability measures with bounded support and their half-space masses.

Every measure answers ``mass(H)`` for closed half-spaces ``H+``.  Uniform balls
and planar uniform polygons are evaluated in closed form; smooth caps use
adaptive one-dimensional quadrature of their radial marginal; polytopes in
three or more dimensions use a fixed low-discrepancy node set.  Each result
carries an error bound (zero for closed forms up to rounding).

Both tails of a cut are computed directly so that masses very close to 0 or
1 keep their relative accuracy; :meth:`Measure.excess` exploits this when a
root of ``mass - alpha`` must be located precisely.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special, stats

from .geometry import (
    Hyperplane,
    as_vector,
    ball_cover_points,
    clip_halfplane,
    convex_order,
    disc_polygon_area,
    perp,
    polygon_area,
    square_around,
)
from .geometry import Polytope as _PolytopeSet

_EPS = np.finfo(float).eps
QMC_DEFAULT_NODES = 2**20
MC_CHUNK = 2**20


@dataclass(frozen=True)
class MassValue:
    """A mass in ``[0, 1]`` together with an error bound for it."""

    value: float
    error_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error_bound", float(self.error_bound))

    def __float__(self):
        return self.value


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def _check_dim(m: "Measure", H: Hyperplane):
    if H.dim != m.dim:
        raise ValueError(f"dimension mismatch: measure lives in R^{m.dim}, hyperplane in R^{H.dim}")


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


class Measure:
    """Base class of all measure models.

    Subclasses implement :meth:`_tails`, returning ``(mu(H+), mu(H-), err)``
    with the smaller tail computed directly.
    """

    dim: int
    kind: str = "abstract"
    is_analytic: bool = False
    has_sampler: bool = True

    # -- half-space masses -------------------------------------------------
    def _tails(self, H: Hyperplane, budget: int = 1) -> tuple[float, float, float]:
        raise NotImplementedError

    def tails(self, H: Hyperplane, budget: int = 1) -> tuple[float, float, float]:
        _check_dim(self, H)
        return self._tails(H, budget)

    def mass(self, H: Hyperplane, budget: int = 1) -> MassValue:
        up, _, err = self.tails(H, budget)
        return MassValue(_clip01(up), err)

    def excess(self, H: Hyperplane, alpha: float, budget: int = 1) -> float:
        """``mu(H+) - alpha`` without cancellation in the small tail."""
        up, lo, _ = self.tails(H, budget)
        if up <= 0.5:
            return up - alpha
        return (1.0 - alpha) - lo

    # -- geometry ----------------------------------------------------------
    def bounding_ball(self) -> tuple[np.ndarray, float]:
        raise NotImplementedError

    def support_points(self) -> np.ndarray:
        """Point set whose convex hull covers the support."""
        c, r = self.bounding_ball()
        return ball_cover_points(c, r)

    def density(self, x) -> np.ndarray | float:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError(f"{type(self).__name__} has no sampler")

    def transformed(self, R: np.ndarray, t) -> "Measure":
        raise NotImplementedError

    # -- planar line integrals ----------------------------------------------
    def line_moments(self, p, u, t0: float = -math.inf, t1: float = math.inf) -> tuple[float, float]:
        """Return ``(int h dt, int t h dt)`` along ``p + t u`` for ``t`` in ``[t0, t1]``.

        Planar measures only; ``u`` must be a unit vector.
        """
        raise NotImplementedError

    def mass_wedge(self, H1: Hyperplane, H2: Hyperplane) -> MassValue:
        """Planar mass of ``H1+ ∩ H2+``.

        The generic rule integrates line integrals over lines parallel to
        ``H1`` with adaptive quadrature.
        """
        if self.dim != 2:
            raise ValueError("wedge masses are planar only")
        v1, v2 = H1.normal, H2.normal
        u = perp(v1)
        c, r = self.bounding_ball()
        s_lo = max(H1.offset, float(c @ v1) - r)
        s_hi = float(c @ v1) + r
        if s_lo >= s_hi:
            return MassValue(0.0, 0.0)
        uv2 = float(u @ v2)

        def inner(s):
            p = s * v1
            base = H2.offset - s * float(v1 @ v2)
            if abs(uv2) < 1e-15:
                if base > 0:
                    return 0.0
                return self.line_moments(p, u)[0]
            tb = base / uv2
            if uv2 > 0:
                return self.line_moments(p, u, tb, math.inf)[0]
            return self.line_moments(p, u, -math.inf, tb)[0]

        pts = list(self._wedge_breakpoints(v1))
        # where the boundary of H2 crosses the support circle the integrand has kinks
        d = H2.offset - float(c @ v2)
        if abs(d) < r:
            q = c + d * v2
            h = math.sqrt((r - abs(d)) * (r + abs(d)))
            pts += [float((q + h * perp(v2)) @ v1), float((q - h * perp(v2)) @ v1)]
        pts = sorted(s for s in pts if s_lo < s < s_hi)
        val, err = integrate.quad(inner, s_lo, s_hi, points=pts or None, limit=200, epsabs=1e-13, epsrel=1e-11)
        return MassValue(_clip01(val), err + 8 * _EPS)

    def _wedge_breakpoints(self, v) -> list[float]:
        return []

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# uniform ball


def ball_cap_tails(n: int, t: float) -> tuple[float, float]:
    """Fractions of the unit n-ball above and below ``x_1 = t``."""
    if t >= 1.0:
        return 0.0, 1.0
    if t <= -1.0:
        return 1.0, 0.0
    a = abs(t)
    if a < 0.5:
        # near the centre 1 - t^2 rounds away t; integrate the slab [0, t] instead
        small = 0.5 - 0.5 * float(special.betainc(0.5, (n + 1) / 2.0, a * a))
    else:
        small = 0.5 * float(special.betainc((n + 1) / 2.0, 0.5, (1.0 - a) * (1.0 + a)))
    if t >= 0:
        return small, 1.0 - small
    return 1.0 - small, small


class UniformBall(Measure):
    kind = "uniform_ball"
    is_analytic = True

    def __init__(self, center, radius: float):
        self.center = as_vector(center).copy()
        self.center.setflags(write=False)
        self.dim = self.center.size
        if not radius > 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self._rho = 1.0 / (unit_ball_volume(self.dim) * self.radius**self.dim)

    def _tails(self, H, budget=1):
        t = (H.offset - float(self.center @ H.normal)) / self.radius
        up, lo = ball_cap_tails(self.dim, t)
        return up, lo, 4 * _EPS

    def bounding_ball(self):
        return self.center.copy(), self.radius

    def density(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.linalg.norm(x - self.center, axis=-1) <= self.radius
        return np.where(inside, self._rho, 0.0) if x.ndim > 1 else (self._rho if inside else 0.0)

    def sample(self, rng, size):
        g = rng.standard_normal((size, self.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = self.radius * rng.random(size) ** (1.0 / self.dim)
        return self.center + g * r[:, None]

    def transformed(self, R, t):
        return UniformBall(np.asarray(R) @ self.center + t, self.radius)

    def line_moments(self, p, u, t0=-math.inf, t1=math.inf):
        p, u = np.asarray(p, float), np.asarray(u, float)
        w = self.center - p
        tc = float(w @ u)
        d = float(u[0] * w[1] - u[1] * w[0])
        h2 = (self.radius - abs(d)) * (self.radius + abs(d))
        if h2 <= 0:
            return 0.0, 0.0
        h = math.sqrt(h2)
        a, b = max(t0, tc - h), min(t1, tc + h)
        if a >= b:
            return 0.0, 0.0
        return self._rho * (b - a), self._rho * 0.5 * (b - a) * (b + a)

    def mass_wedge(self, H1, H2):
        if self.dim != 2:
            raise ValueError("wedge masses are planar only")
        box = square_around(self.center, 2 * self.radius)
        poly = clip_halfplane(clip_halfplane(box, H1.normal, H1.offset), H2.normal, H2.offset)
        area = disc_polygon_area(self.center, self.radius, poly)
        return MassValue(_clip01(area * self._rho), 16 * _EPS)

    def _wedge_breakpoints(self, v):
        m = float(self.center @ v)
        return [m - self.radius, m + self.radius]

    def to_dict(self):
        return {"type": self.kind, "center": self.center.tolist(), "radius": self.radius}

    def __repr__(self):
        return f"UniformBall(center={self.center.tolist()}, radius={self.radius})"


# ---------------------------------------------------------------------------
# uniform convex polytope


@lru_cache(maxsize=8)
def _sobol_unit(dim: int, count: int) -> np.ndarray:
    sob = stats.qmc.Sobol(d=dim, scramble=False)
    # skip the origin node, which sits on the box corner
    sob.fast_forward(1)
    pts = sob.random(count)
    pts.setflags(write=False)
    return pts


class UniformPolytope(Measure):
    """Uniform density on the convex hull of a vertex list.

    Planar polygons are evaluated exactly by half-plane clipping.  In higher
    dimensions the half-space mass is the fraction of a fixed low-discrepancy
    node set (inside the polytope) lying on the positive side.
    """

    kind = "uniform_polytope"

    def __init__(self, vertices, nodes: int = QMC_DEFAULT_NODES):
        self.hull = _PolytopeSet(vertices)
        self.dim = self.hull.dim
        if self.dim < 2:
            raise ValueError("polytope measures need dimension >= 2")
        self.vertices = self.hull.vertices
        self.volume = float(self.hull.volume)
        if not self.volume > 0:
            raise ValueError("polytope is degenerate (zero volume)")
        self.nodes = int(nodes)
        self.is_analytic = self.dim == 2
        if self.dim == 2:
            self._poly = convex_order(np.asarray(self.vertices))
        self._node_cache: dict[int, np.ndarray] = {}

    def _interior_nodes(self, budget: int) -> np.ndarray:
        count = self.nodes * budget
        pts = self._node_cache.get(count)
        if pts is None:
            lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
            box_vol = float(np.prod(hi - lo))
            # draw enough nodes that about `count` land inside
            draw = int(math.ceil(count * box_vol / self.volume))
            u = _sobol_unit(self.dim, draw)
            x = lo + u * (hi - lo)
            A, b = self.hull.equations[:, :-1], self.hull.equations[:, -1]
            inside = np.all(x @ A.T + b <= 0, axis=1)
            pts = x[inside]
            pts.setflags(write=False)
            self._node_cache[count] = pts
        return pts

    def _tails(self, H, budget=1):
        if self.dim == 2:
            total = self.volume
            pos = clip_halfplane(self._poly, H.normal, H.offset)
            neg = clip_halfplane(self._poly, -H.normal, -H.offset)
            up = abs(polygon_area(pos)) / total
            lo = abs(polygon_area(neg)) / total
            return _clip01(up), _clip01(lo), 64 * _EPS
        pts = self._interior_nodes(budget)
        proj = pts @ H.normal
        n = len(pts)
        k_up = int(np.count_nonzero(proj >= H.offset))
        k_lo = int(np.count_nonzero(proj <= H.offset))
        p = k_up / n
        err = 3.0 * math.sqrt(p * (1 - p) / n) + 1.0 / n
        return k_up / n, k_lo / n, err

    def bounding_ball(self):
        c = 0.5 * (self.vertices.min(axis=0) + self.vertices.max(axis=0))
        r = float(np.max(np.linalg.norm(self.vertices - c, axis=1)))
        return c, r

    def support_points(self):
        return np.array(self.vertices)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        A, b = self.hull.equations[:, :-1], self.hull.equations[:, -1]
        inside = np.all(x @ A.T + b <= 1e-12, axis=-1)
        rho = 1.0 / self.volume
        return np.where(inside, rho, 0.0) if x.ndim > 1 else (rho if inside else 0.0)

    def sample(self, rng, size):
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        A, b = self.hull.equations[:, :-1], self.hull.equations[:, -1]
        out = []
        have = 0
        ratio = self.volume / float(np.prod(hi - lo))
        while have < size:
            want = int((size - have) / ratio * 1.2) + 64
            x = lo + rng.random((want, self.dim)) * (hi - lo)
            x = x[np.all(x @ A.T + b <= 0, axis=1)]
            out.append(x)
            have += len(x)
        return np.concatenate(out)[:size]

    def transformed(self, R, t):
        return UniformPolytope(self.vertices @ np.asarray(R).T + t, nodes=self.nodes)

    def line_moments(self, p, u, t0=-math.inf, t1=math.inf):
        if self.dim != 2:
            raise ValueError("line integrals are planar only")
        p, u = np.asarray(p, float), np.asarray(u, float)
        v = -perp(u)
        off = float(p @ v)
        seg = self.hull.slice_interval(v, off)
        if seg is None:
            return 0.0, 0.0
        # slice_interval parametrizes off*v + s*perp(v) = off*v + s*u
        shift = float(p @ u)
        a, b = max(t0, seg[0] - shift), min(t1, seg[1] - shift)
        if a >= b:
            return 0.0, 0.0
        rho = 1.0 / self.volume
        return rho * (b - a), rho * 0.5 * (b - a) * (b + a)

    def mass_wedge(self, H1, H2):
        if self.dim != 2:
            raise ValueError("wedge masses are planar only")
        poly = clip_halfplane(clip_halfplane(self._poly, H1.normal, H1.offset), H2.normal, H2.offset)
        return MassValue(_clip01(abs(polygon_area(poly)) / self.volume), 64 * _EPS)

    def _wedge_breakpoints(self, v):
        return sorted(set(float(x) for x in self.vertices @ v))

    def to_dict(self):
        d = {"type": self.kind, "vertices": np.asarray(self.vertices).tolist()}
        if self.nodes != QMC_DEFAULT_NODES:
            d["nodes"] = self.nodes
        return d

    def __repr__(self):
        return f"UniformPolytope({len(self.vertices)} vertices in R^{self.dim})"


# ---------------------------------------------------------------------------
# smooth cap


def _cap_primitive(k: float, sigma: float) -> float:
    """``int_0^sigma (1 - s^2)^k ds`` for ``|sigma| <= 1``."""
    s2 = min(1.0, sigma * sigma)
    val = 0.5 * special.beta(0.5, k + 1.0) * special.betainc(0.5, k + 1.0, s2)
    return math.copysign(float(val), sigma)


class SmoothCap(Measure):
    """Density ``C (1 - |x - c|^2 / r^2)^k`` on the ball, zero outside.

    Half-space masses integrate the radial marginal profile
    ``(1 - s^2)^(k + (n-1)/2)`` with adaptive quadrature.
    """

    kind = "smooth_cap"

    def __init__(self, center, radius: float, exponent: float = 2.0):
        self.center = as_vector(center).copy()
        self.center.setflags(write=False)
        self.dim = self.center.size
        if not radius > 0:
            raise ValueError("radius must be positive")
        if not exponent >= 0:
            raise ValueError("cap exponent must be non-negative")
        self.radius = float(radius)
        self.exponent = float(exponent)
        n, k = self.dim, self.exponent
        # total mass of (1-|x|^2)^k on the unit ball: n V_n * B(n/2, k+1) / 2
        unit_mass = n * unit_ball_volume(n) * 0.5 * special.beta(n / 2.0, k + 1.0)
        self._C = 1.0 / (unit_mass * self.radius**n)
        self._a = k + (n - 1) / 2.0
        total, err = integrate.quad(lambda s: 1.0, -1.0, 1.0, weight="alg", wvar=(self._a, self._a))
        self._profile_total = total
        self._profile_err = err

    def _tail_integral(self, t: float, budget: int) -> tuple[float, float]:
        # int_t^1 (1 - s^2)^a ds = int_0^{1-t} (2 - u)^a u^a du, weighted rule at u = 0
        a = self._a
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(
                lambda u: (2.0 - u) ** a,
                0.0,
                1.0 - t,
                weight="alg",
                wvar=(a, 0.0),
                limit=50 * budget,
                epsabs=1e-300,
                epsrel=1e-12 / budget,
            )
        return val, err

    def _tails(self, H, budget=1):
        t = (H.offset - float(self.center @ H.normal)) / self.radius
        if t >= 1.0:
            return 0.0, 1.0, 0.0
        if t <= -1.0:
            return 1.0, 0.0, 0.0
        small, err = self._tail_integral(abs(t), budget)
        frac = small / self._profile_total
        err = err / self._profile_total + frac * self._profile_err / self._profile_total + 4 * _EPS
        if t >= 0:
            return frac, 1.0 - frac, err
        return 1.0 - frac, frac, err

    def bounding_ball(self):
        return self.center.copy(), self.radius

    def density(self, x):
        x = np.asarray(x, dtype=float)
        q = 1.0 - np.sum((x - self.center) ** 2, axis=-1) / self.radius**2
        val = self._C * np.where(q > 0, np.maximum(q, 0.0) ** self.exponent, 0.0)
        return val if x.ndim > 1 else float(val)

    def sample(self, rng, size):
        # |x - c|^2 / r^2 ~ Beta(n/2, k+1) for this density
        g = rng.standard_normal((size, self.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        rho = np.sqrt(rng.beta(self.dim / 2.0, self.exponent + 1.0, size))
        return self.center + g * (self.radius * rho)[:, None]

    def transformed(self, R, t):
        return SmoothCap(np.asarray(R) @ self.center + t, self.radius, self.exponent)

    def line_moments(self, p, u, t0=-math.inf, t1=math.inf):
        if self.dim != 2:
            raise ValueError("line integrals are planar only")
        p, u = np.asarray(p, float), np.asarray(u, float)
        w = self.center - p
        tc = float(w @ u)
        d = abs(float(u[0] * w[1] - u[1] * w[0]))
        h2 = (self.radius - d) * (self.radius + d)
        if h2 <= 0:
            return 0.0, 0.0
        L = math.sqrt(h2)
        sa = max(-1.0, (t0 - tc) / L) if t0 > -math.inf else -1.0
        sb = min(1.0, (t1 - tc) / L) if t1 < math.inf else 1.0
        if sa >= sb:
            return 0.0, 0.0
        k = self.exponent
        scale = self._C * (L / self.radius) ** (2 * k)
        m0 = scale * L * (_cap_primitive(k, sb) - _cap_primitive(k, sa))
        q = lambda s: max(0.0, (1.0 - s) * (1.0 + s)) ** (k + 1.0)
        m1_centered = scale * L * L * (q(sa) - q(sb)) / (2.0 * (k + 1.0))
        return m0, tc * m0 + m1_centered

    def _wedge_breakpoints(self, v):
        m = float(self.center @ v)
        return [m - self.radius, m, m + self.radius]

    def to_dict(self):
        return {"type": self.kind, "center": self.center.tolist(), "radius": self.radius, "exponent": self.exponent}

    def __repr__(self):
        return f"SmoothCap(center={self.center.tolist()}, radius={self.radius}, exponent={self.exponent})"


# ---------------------------------------------------------------------------
# mixtures


class Mixture(Measure):
    kind = "mixture"

    def __init__(self, components, weights=None):
        comps = list(components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        if weights is None:
            weights = [1.0] * len(comps)
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(comps),) or np.any(w < 0) or not w.sum() > 0:
            raise ValueError("mixture weights must be non-negative with positive sum")
        self.weights = w / w.sum()
        self.components = comps
        dims = {c.dim for c in comps}
        if len(dims) != 1:
            raise ValueError("mixture components must share a dimension")
        self.dim = dims.pop()
        self.is_analytic = all(c.is_analytic for c in comps)
        self.has_sampler = all(c.has_sampler for c in comps)

    def _tails(self, H, budget=1):
        ups, los, errs = zip(*(c._tails(H, budget) for c in self.components))
        w = self.weights
        return (
            math.fsum(wi * u for wi, u in zip(w, ups)),
            math.fsum(wi * l for wi, l in zip(w, los)),
            math.fsum(wi * e for wi, e in zip(w, errs)) + 4 * _EPS,
        )

    def excess(self, H, alpha, budget=1):
        _check_dim(self, H)
        terms = [-alpha]
        for wi, c in zip(self.weights, self.components):
            up, lo, _ = c._tails(H, budget)
            if up <= 0.5:
                terms.append(wi * up)
            else:
                terms.append(wi)
                terms.append(-wi * lo)
        return math.fsum(terms)

    def bounding_ball(self):
        balls = [c.bounding_ball() for c in self.components]
        centers = np.array([b[0] for b in balls])
        lo = np.min(centers - np.array([b[1] for b in balls])[:, None], axis=0)
        hi = np.max(centers + np.array([b[1] for b in balls])[:, None], axis=0)
        c = 0.5 * (lo + hi)
        r = max(float(np.linalg.norm(bc - c)) + br for bc, br in balls)
        return c, r

    def support_points(self):
        return np.concatenate([c.support_points() for c in self.components])

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return sum(wi * c.density(x) for wi, c in zip(self.weights, self.components))

    def sample(self, rng, size):
        counts = rng.multinomial(size, self.weights)
        parts = [c.sample(rng, k) for c, k in zip(self.components, counts) if k > 0]
        x = np.concatenate(parts)
        return x[rng.permutation(size)]

    def transformed(self, R, t):
        return Mixture([c.transformed(R, t) for c in self.components], self.weights)

    def line_moments(self, p, u, t0=-math.inf, t1=math.inf):
        m0 = m1 = 0.0
        for wi, c in zip(self.weights, self.components):
            a, b = c.line_moments(p, u, t0, t1)
            m0 += wi * a
            m1 += wi * b
        return m0, m1

    def mass_wedge(self, H1, H2):
        vals = [c.mass_wedge(H1, H2) for c in self.components]
        return MassValue(
            _clip01(math.fsum(wi * mv.value for wi, mv in zip(self.weights, vals))),
            math.fsum(wi * mv.error_bound for wi, mv in zip(self.weights, vals)),
        )

    def _wedge_breakpoints(self, v):
        return sorted(set(s for c in self.components for s in c._wedge_breakpoints(v)))

    def to_dict(self):
        return {
            "type": self.kind,
            "components": [{"weight": float(w), "measure": c.to_dict()} for w, c in zip(self.weights, self.components)],
        }

    def __repr__(self):
        return f"Mixture({len(self.components)} components in R^{self.dim})"


class KernelCloud(Mixture):
    """Equal-weight sum of compactly supported bump kernels around data points.

    The kernel is the smooth cap ``(1 - |u|^2 / b^2)^k`` of radius ``b``
    (the bandwidth), so the support stays bounded.
    """

    kind = "kernel_cloud"

    def __init__(self, points, bandwidth: float, exponent: float = 2.0):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or len(pts) == 0:
            raise ValueError("kernel cloud needs a nonempty (k, n) point array")
        if not bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        self.points = pts
        self.bandwidth = float(bandwidth)
        self.exponent = float(exponent)
        super().__init__([SmoothCap(p, bandwidth, exponent) for p in pts])

    def transformed(self, R, t):
        return KernelCloud(self.points @ np.asarray(R).T + t, self.bandwidth, self.exponent)

    def to_dict(self):
        return {
            "type": self.kind,
            "points": self.points.tolist(),
            "bandwidth": self.bandwidth,
            "exponent": self.exponent,
        }

    def __repr__(self):
        return f"KernelCloud({len(self.points)} points, bandwidth={self.bandwidth})"


# ---------------------------------------------------------------------------
# operations


def mass_halfspace(m: Measure, H: Hyperplane, budget: int = 1) -> MassValue:
    """Mass of the closed positive half-space of ``H``."""
    return m.mass(H, budget)


def mass_halfspace_mc(m: Measure, H: Hyperplane, samples: int, seed: int) -> MassValue:
    """Fixed-seed Monte Carlo estimate of ``mu(H+)`` with a 3-sigma error bound."""
    _check_dim(m, H)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not m.has_sampler:
        raise ValueError(f"{type(m).__name__} has no sampler")
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        k = min(left, MC_CHUNK)
        x = m.sample(rng, k)
        hits += int(np.count_nonzero(x @ H.normal >= H.offset))
        left -= k
    p = hits / samples
    return MassValue(p, 3.0 * math.sqrt(p * (1.0 - p) / samples))


def bounding_ball(m: Measure) -> tuple[np.ndarray, float]:
    return m.bounding_ball()


def density_at(m: Measure, x) -> float:
    return float(m.density(as_vector(x, m.dim)))


def mass_of_set(m: Measure, S, samples: int = 2**18, seed: int = 0) -> MassValue:
    """``mu(S)`` for a convex container ``S``.

    Exact (1) when ``S`` contains the bounding ball of ``m``; otherwise a
    fixed-seed sampling estimate with a 3-sigma bound.
    """
    c, r = m.bounding_ball()
    if _contains_ball(S, c, r):
        return MassValue(1.0, 0.0)
    rng = np.random.default_rng(seed)
    x = m.sample(rng, samples)
    if hasattr(S, "equations"):
        A, b = S.equations[:, :-1], S.equations[:, -1]
        inside = np.all(x @ A.T + b <= 1e-12, axis=1)
    else:
        inside = np.linalg.norm(x - S.center, axis=1) <= S.radius
    p = float(np.count_nonzero(inside)) / samples
    return MassValue(p, 3.0 * math.sqrt(p * (1 - p) / samples) + 1.0 / samples)


def _contains_ball(S, c, r) -> bool:
    if hasattr(S, "equations"):
        A, b = S.equations[:, :-1], S.equations[:, -1]
        norms = np.linalg.norm(A, axis=1)
        return bool(np.all(A @ c + b + r * norms <= 1e-12))
    return bool(np.linalg.norm(c - S.center) + r <= S.radius + 1e-12)


# ---------------------------------------------------------------------------
# JSON


def measure_from_dict(d: dict) -> Measure:
    kind = d.get("type")
    if kind == "uniform_ball":
        return UniformBall(d["center"], d["radius"])
    if kind == "uniform_polytope":
        return UniformPolytope(d["vertices"], nodes=d.get("nodes", QMC_DEFAULT_NODES))
    if kind == "smooth_cap":
        return SmoothCap(d["center"], d["radius"], d.get("exponent", 2.0))
    if kind == "mixture":
        comps = d["components"]
        return Mixture([measure_from_dict(c["measure"]) for c in comps], [c["weight"] for c in comps])
    if kind == "kernel_cloud":
        return KernelCloud(d["points"], d["bandwidth"], d.get("exponent", 2.0))
    raise ValueError(f"unknown measure type {kind!r}")
