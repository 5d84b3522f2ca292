"""Search for hyperplanes with prescribed masses on n measures in R^n.

The search runs over unit normals only.  For each normal ``v`` every measure
gets its own offset ``lambda_i(v)`` (the plateau midpoint from
:func:`~hamsplit.auxiliary.solve_lambda`, or the container offset when
separators are given), and a common splitting hyperplane with normal ``v``
exists exactly when these offsets agree.  The pipeline is: scan a sphere
lattice, polish the best normals with damped Newton steps on local charts,
optionally certify with a Miranda box around the answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from .auxiliary import LambdaSolution, container_offset, solve_lambda
from .geometry import ConvexSet, Hyperplane, rotation_matrix, sphere_lattice, tangent_basis
from .measures import Measure, mass_halfspace, mass_halfspace_mc, measure_from_dict
from .miranda import Box, MirandaCertificate, miranda_root

LAMBDA_TOL = 1e-12
# Newton tries up to this many times config.starts diverse starts before giving up
NEWTON_ESCALATION = 4


class ProblemError(ValueError):
    """Inconsistent problem description."""


@dataclass(frozen=True, eq=False)
class Problem:
    measures: tuple[Measure, ...]
    alphas: tuple[float, ...]
    separators: tuple[ConvexSet, ...] | None = None

    def __post_init__(self):
        ms = tuple(self.measures)
        al = tuple(float(a) for a in self.alphas)
        if not ms:
            raise ProblemError("a problem needs at least one measure")
        n = ms[0].dim
        if any(m.dim != n for m in ms):
            raise ProblemError("measures live in different dimensions")
        if len(ms) != n:
            raise ProblemError(f"count ≠ dimension: {len(ms)} measures in R^{n}")
        if len(al) != n:
            raise ProblemError(f"expected {n} alphas, got {len(al)}")
        if any(not 0.0 <= a <= 1.0 for a in al):
            raise ProblemError("alphas must lie in [0, 1]")
        seps = None
        if self.separators is not None:
            seps = tuple(self.separators)
            if len(seps) != n or any(S.dim != n for S in seps):
                raise ProblemError("need one separator set per measure, in the same dimension")
        object.__setattr__(self, "measures", ms)
        object.__setattr__(self, "alphas", al)
        object.__setattr__(self, "separators", seps)

    @property
    def dim(self) -> int:
        return self.measures[0].dim

    @property
    def is_analytic(self) -> bool:
        return all(m.is_analytic for m in self.measures)

    def with_alphas(self, alphas) -> "Problem":
        return replace(self, alphas=tuple(alphas))

    def transformed(self, R, t) -> "Problem":
        seps = None if self.separators is None else tuple(S.transformed(R, t) for S in self.separators)
        return Problem(tuple(m.transformed(R, t) for m in self.measures), self.alphas, seps)

    def to_dict(self) -> dict:
        d = {"schema": 1, "measures": [m.to_dict() for m in self.measures], "alphas": list(self.alphas)}
        if self.separators is not None:
            d["separators"] = [S.to_dict() for S in self.separators]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Problem":
        if d.get("schema", 1) != 1:
            raise ProblemError(f"unsupported schema version {d.get('schema')!r}")
        seps = d.get("separators")
        if seps is not None:
            seps = tuple(ConvexSet.from_dict(s) for s in seps)
        return cls(tuple(measure_from_dict(m) for m in d["measures"]), tuple(d["alphas"]), seps)


@dataclass(frozen=True)
class SplitConfig:
    mass_tol: float | None = None  # None: 1e-6 for analytic problems, 1e-3 otherwise
    grid: int | None = None  # scan resolution; None picks by dimension
    starts: int = 4
    seed: int = 0
    methods: tuple[str, ...] = ("grid", "newton", "miranda")
    certify: bool = False
    max_iter: int = 40
    certify_radius: float = 1e-3
    certify_tol: float = 1e-6
    miranda_grid: int = 17

    def __post_init__(self):
        if self.mass_tol is not None and not self.mass_tol > 0:
            raise ValueError("mass_tol must be positive")
        if self.grid is not None and self.grid < 8:
            raise ValueError("grid resolution must be at least 8")
        if self.starts < 1 or self.max_iter < 1:
            raise ValueError("counts must be at least 1")
        if not self.certify_radius > 0 or not self.certify_tol > 0:
            raise ValueError("certification tolerances must be positive")
        unknown = set(self.methods) - {"grid", "newton", "miranda"}
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")

    def tolerance(self, problem: Problem) -> float:
        if self.mass_tol is not None:
            return self.mass_tol
        return 1e-6 if problem.is_analytic else 1e-3

    def resolution(self, n: int) -> int:
        if self.grid is not None:
            return self.grid
        return {1: 8, 2: 360, 3: 256}.get(n, 128 * n)


@dataclass(frozen=True, eq=False)
class ResidualScan:
    resolution: int
    best_v: np.ndarray
    best_norm: float
    histogram: tuple[list[int], list[float]]
    normals: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "resolution": self.resolution,
            "best_v": self.best_v.tolist(),
            "best_norm": self.best_norm,
            "histogram": {"counts": self.histogram[0], "edges": self.histogram[1]},
        }


@dataclass(frozen=True, eq=False)
class SplitResult:
    hyperplane: Hyperplane
    achieved: tuple[float, ...]
    residual_norm: float
    method: str
    evaluations: int
    plateau_rule: bool = False
    certificate: MirandaCertificate | None = None
    mass_tol: float = 1e-6

    found = True

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "status": "found",
            "hyperplane": self.hyperplane.to_dict(),
            "achieved": list(self.achieved),
            "residual_norm": self.residual_norm,
            "mass_tol": self.mass_tol,
            "method": self.method,
            "evaluations": self.evaluations,
            "plateau_rule": self.plateau_rule,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class NotFound:
    scan: ResidualScan
    best: SplitResult | None = None
    mass_tol: float = 1e-6

    found = False

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "status": "not_found",
            "mass_tol": self.mass_tol,
            "scan": self.scan.to_dict(),
            "best_attempt": None
            if self.best is None
            else {
                "hyperplane": self.best.hyperplane.to_dict(),
                "achieved": list(self.best.achieved),
                "residual_norm": self.best.residual_norm,
            },
        }


# ---------------------------------------------------------------------------
# residual maps


class _Counter:
    def __init__(self):
        self.n = 0


def residual_p(problem: Problem, v, lam: float, budget: int = 1) -> np.ndarray:
    """``(mu_i(H+_{v,lam}) - alpha_i)_i``."""
    H = Hyperplane(v, lam)
    if H.dim != problem.dim:
        raise ProblemError("dimension mismatch")
    return np.array([mass_halfspace(m, H, budget).value - a for m, a in zip(problem.measures, problem.alphas)])


def _solutions(problem: Problem, v) -> list[LambdaSolution]:
    return [solve_lambda(m, v, a, LAMBDA_TOL) for m, a in zip(problem.measures, problem.alphas)]


def _offsets(problem: Problem, v, sols=None) -> np.ndarray:
    if problem.separators is None:
        sols = sols or _solutions(problem, v)
        return np.array([s.chosen for s in sols])
    return np.array(
        [container_offset(m, S, a, v, LAMBDA_TOL) for m, S, a in zip(problem.measures, problem.separators, problem.alphas)]
    )


def reduced_residual(problem: Problem, v) -> np.ndarray:
    """``lambda_i(v) - lambda_1(v)`` for ``i = 2..n``."""
    v = np.asarray(v, dtype=float)
    if v.size != problem.dim:
        raise ProblemError("dimension mismatch")
    lam = _offsets(problem, v)
    return lam[1:] - lam[0]


def _candidate(problem: Problem, v, counter: _Counter, method: str, mass_tol: float) -> SplitResult:
    """Best hyperplane with normal ``v``: the common plateau point if the
    offset intervals intersect, otherwise the mean offset."""
    sols = _solutions(problem, v)
    counter.n += problem.dim
    lo = max(s.lambda_min for s in sols)
    hi = min(s.lambda_max for s in sols)
    plateau = lo <= hi and any(s.width > 2 * LAMBDA_TOL for s in sols)
    if lo <= hi:
        lam = 0.5 * (lo + hi)
    else:
        lam = float(np.mean(_offsets(problem, v, sols)))
    H = Hyperplane(v, lam)
    achieved = tuple(mass_halfspace(m, H).value for m in problem.measures)
    counter.n += problem.dim
    norm = max(abs(x - a) for x, a in zip(achieved, problem.alphas))
    return SplitResult(H, achieved, norm, method, counter.n, plateau, None, mass_tol)


# ---------------------------------------------------------------------------
# scan


def _lattice(n: int, resolution: int, seed: int) -> np.ndarray:
    pts = sphere_lattice(n, resolution)
    if seed and n > 1:
        pts = pts @ rotation_matrix(n, np.random.default_rng(seed)).T
    return pts


def scan_residual(problem: Problem, resolution: int, seed: int = 0) -> ResidualScan:
    """Max-norm of the reduced residual over a deterministic sphere lattice."""
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    n = problem.dim
    normals = _lattice(n, resolution, seed)
    res = np.array([reduced_residual(problem, v) for v in normals]).reshape(len(normals), n - 1)
    norms = np.max(np.abs(res), axis=1) if n > 1 else np.zeros(len(normals))
    i = int(np.argmin(norms))
    counts, edges = np.histogram(norms, bins=20)
    return ResidualScan(resolution, normals[i].copy(), float(norms[i]), (counts.tolist(), edges.tolist()), normals, norms, res)


# ---------------------------------------------------------------------------
# local refinement


def _chart(v0: np.ndarray):
    B = tangent_basis(v0)

    def v_of(y):
        w = v0 + B @ y
        return w / np.linalg.norm(w)

    return B, v_of


def _newton(problem: Problem, v0: np.ndarray, max_iter: int, counter: _Counter, lam_tol: float) -> np.ndarray:
    n = problem.dim
    v = v0
    F = reduced_residual(problem, v)
    counter.n += n
    for _ in range(max_iter):
        if np.max(np.abs(F)) <= lam_tol:
            break
        _, v_of = _chart(v)
        h = 1e-5
        J = np.empty((n - 1, n - 1))
        for j in range(n - 1):
            e = np.zeros(n - 1)
            e[j] = h
            J[:, j] = (reduced_residual(problem, v_of(e)) - F) / h
            counter.n += n
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        norm = np.linalg.norm(step)
        if norm > 0.5:
            step *= 0.5 / norm
        t, improved = 1.0, False
        f0 = np.max(np.abs(F))
        for _ in range(20):
            v_new = v_of(t * step)
            F_new = reduced_residual(problem, v_new)
            counter.n += n
            if np.max(np.abs(F_new)) < f0:
                improved = True
                break
            t *= 0.5
        if not improved:
            break
        v, F = v_new, F_new
    return v


def _diverse_starts(scan: ResidualScan, order: np.ndarray, count: int) -> list[np.ndarray]:
    """Lowest-residual lattice normals, skipping near-duplicates of earlier picks.

    Neighbouring lattice points usually drain into the same Newton basin, so
    a start closer than three lattice spacings to an earlier one is skipped.
    """
    n = scan.normals.shape[1]
    spacing = (4 * np.pi / scan.resolution) ** (1.0 / (n - 1)) if n > 2 else 2 * np.pi / scan.resolution
    min_cos = math.cos(min(3 * spacing, np.pi / 4))
    picked: list[np.ndarray] = []
    for i in order:
        v = scan.normals[i]
        if all(float(v @ w) < min_cos for w in picked):
            picked.append(v)
            if len(picked) == count:
                break
    return picked


def _bracketed_roots(problem: Problem, scan: ResidualScan, counter: _Counter) -> list[np.ndarray]:
    """Planar case: refine every sign change of the scalar residual by Brent's method."""
    ang = np.arctan2(scan.normals[:, 1], scan.normals[:, 0])
    order = np.argsort(ang)
    ang, r = ang[order], scan.residuals[order, 0]
    roots = []

    def f(a):
        counter.n += 2
        return float(reduced_residual(problem, np.array([math.cos(a), math.sin(a)]))[0])

    k = len(ang)
    for i in range(k):
        j = (i + 1) % k
        a0, a1 = ang[i], ang[j] + (2 * np.pi if j == 0 else 0.0)
        if r[i] == 0:
            roots.append((abs(r[i]), a0))
        elif r[i] * r[j] < 0:
            f0, f1 = f(a0), f(a1)
            if f0 * f1 >= 0:  # sign change was rounding noise; keep the smaller end
                roots.append((min(abs(f0), abs(f1)), a0 if abs(f0) <= abs(f1) else a1))
                continue
            a = optimize.brentq(f, a0, a1, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            roots.append((0.0, a))
    roots.sort(key=lambda t: t[0])
    return [np.array([math.cos(a), math.sin(a)]) for _, a in roots]


def _certify(problem: Problem, result: SplitResult, config: SplitConfig):
    """Miranda box in (chart, offset) coordinates around ``result``."""
    n = problem.dim
    v0 = result.hyperplane.normal
    lam0 = result.hyperplane.offset
    _, v_of = _chart(v0)

    def g(z):
        return residual_p(problem, v_of(z[: n - 1]), lam0 + z[-1])

    # off-centre so the candidate does not sit on dyadic subdivision corners
    box = Box.cube(n, config.certify_radius, center=np.full(n, config.certify_radius * (math.sqrt(2) - 1) / 7))
    found = miranda_root(g, box, config.certify_tol, grid=config.miranda_grid)
    if found is None:
        return None, None
    b, cert = found
    z = b.center
    return Hyperplane(v_of(z[: n - 1]), lam0 + z[-1]), cert


def certify_split(problem: Problem, H: Hyperplane, config: SplitConfig | None = None) -> MirandaCertificate | None:
    """Miranda certificate for a zero of the mass residual near ``H``.

    The box lives in (tangent chart of the normal, offset) coordinates
    centred at ``H``; ``None`` when no sub-box could be certified.
    """
    config = config or SplitConfig()
    n = problem.dim
    if n < 2:
        raise ProblemError("certification needs at least two dimensions")
    dummy = SplitResult(H, (), 0.0, "given", 0)
    return _certify(problem, dummy, config)[1]


def find_split(problem: Problem, config: SplitConfig | None = None) -> SplitResult | NotFound:
    """Scan, refine and (optionally) certify a splitting hyperplane."""
    config = config or SplitConfig()
    tol = config.tolerance(problem)
    n = problem.dim
    counter = _Counter()
    lam_tol = 1e-13

    if n == 1:
        cands = [_candidate(problem, np.array([s]), counter, "grid", tol) for s in (1.0, -1.0)]
        best = min(cands, key=lambda c: c.residual_norm)
        if best.residual_norm <= tol:
            return best
        return NotFound(scan_residual(problem, 8), best, tol)

    scan = scan_residual(problem, config.resolution(n), config.seed)
    counter.n += n * scan.resolution
    best: SplitResult | None = None

    def consider(c: SplitResult):
        nonlocal best
        if best is None or c.residual_norm < best.residual_norm:
            best = c
        return c.residual_norm <= tol

    order = np.argsort(scan.norms, kind="stable")
    done = False
    if "grid" in config.methods:
        starts = _bracketed_roots(problem, scan, counter) if n == 2 else []
        starts += [scan.normals[i] for i in order[: config.starts]]
        for v in starts:
            if consider(_candidate(problem, v, counter, "grid", tol)):
                done = True
                break
    if not done and "newton" in config.methods:
        for v0 in _diverse_starts(scan, order, NEWTON_ESCALATION * config.starts):
            v = _newton(problem, v0, config.max_iter, counter, lam_tol)
            if consider(_candidate(problem, v, counter, "newton", tol)):
                done = True
                break
    if not done and "miranda" in config.methods and best is not None:
        H, cert = _certify(problem, best, replace(config, certify_radius=max(config.certify_radius, 2 * np.pi / scan.resolution)))
        if H is not None:
            c = _candidate(problem, H.normal, counter, "miranda", tol)
            if consider(c):
                best = replace(best, certificate=cert)
                done = True

    if not done:
        return NotFound(scan, best, tol)
    result = replace(best, evaluations=counter.n)
    if config.certify and result.certificate is None:
        _, cert = _certify(problem, result, config)
        result = replace(result, certificate=cert)
    return result


# ---------------------------------------------------------------------------
# independent re-check


@dataclass(frozen=True, eq=False)
class VerifyReport:
    passed: bool
    tol: float
    quadrature: tuple
    monte_carlo: tuple
    failures: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "quadrature": [{"value": m.value, "error_bound": m.error_bound} for m in self.quadrature],
            "monte_carlo": [None if m is None else {"value": m.value, "error_bound": m.error_bound} for m in self.monte_carlo],
            "failures": list(self.failures),
        }


def verify_split(problem: Problem, H: Hyperplane, tol: float, samples: int = 2**20, seed: int = 0) -> VerifyReport:
    """Recompute masses with a doubled budget and by Monte Carlo.

    Monte-Carlo comparisons use a 5-sigma band (5/3 of the 3-sigma bound
    reported by the sampler) so that a batch of checks is not dominated by
    chance outliers.
    """
    quad, mc, failures = [], [], []
    for i, (m, a) in enumerate(zip(problem.measures, problem.alphas)):
        q = mass_halfspace(m, H, budget=2)
        quad.append(q)
        if abs(q.value - a) > tol + q.error_bound:
            failures.append(f"measure {i + 1}: mass {q.value:.9g} differs from alpha {a:.9g}")
        if not m.has_sampler:
            mc.append(None)
            continue
        s = mass_halfspace_mc(m, H, samples, seed + i)
        mc.append(s)
        band = 5.0 / 3.0 * s.error_bound
        if abs(s.value - a) > tol + band:
            failures.append(f"measure {i + 1}: Monte-Carlo mass {s.value:.6g} differs from alpha {a:.9g}")
        if abs(s.value - q.value) > band + q.error_bound:
            failures.append(f"measure {i + 1}: quadrature and Monte-Carlo disagree")
    return VerifyReport(not failures, tol, tuple(quad), tuple(mc), tuple(failures))
