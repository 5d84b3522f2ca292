"""Independent oracles shared by the test modules.

Nothing here calls into the mass evaluators under test: cap fractions come
from closed forms or ``scipy.special.betainc``, plateau gaps from plain
bisection, and Monte-Carlo checks draw their own samples.
"""

import math
import sys

import numpy as np
import pytest
from scipy import special


def disc_cap(d: float) -> float:
    """Area fraction of the unit disc in ``{x >= d}``."""
    d = min(1.0, max(-1.0, d))
    return (math.acos(d) - d * math.sqrt(1.0 - d * d)) / math.pi


def ball_cap(t: float, n: int) -> float:
    """Volume fraction of the unit n-ball in ``{x_1 >= t}`` (regularized incomplete beta)."""
    t = min(1.0, max(-1.0, t))
    half = 0.5 * special.betainc((n + 1) / 2, 0.5, 1.0 - t * t)
    return half if t >= 0 else 1.0 - half


def smooth_cap_fraction(t: float, k: float = 2.0) -> float:
    """Mass of ``{x_1 >= t}`` under the planar density ``(1 - |x|^2)^k`` on the unit disc.

    Integrating out the second coordinate leaves a marginal proportional to
    ``(1 - s^2)^(k + 1/2)``, i.e. a symmetric Beta(k+3/2, k+3/2) law on [-1, 1].
    """
    t = min(1.0, max(-1.0, t))
    a = k + 1.5
    return float(special.betainc(a, a, (1.0 - t) / 2.0))


def bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    """Root of a decreasing function with ``f(lo) > 0 > f(hi)``."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def d_star() -> float:
    """Offset at which a unit disc's cap carries mass 1/4."""
    return bisect(lambda d: disc_cap(d) - 0.25, 0.0, 1.0)


def uniform_disc_samples(rng, size: int, center=(0.0, 0.0), radius: float = 1.0) -> np.ndarray:
    r = radius * np.sqrt(rng.random(size))
    a = 2 * np.pi * rng.random(size)
    return np.asarray(center) + np.column_stack([r * np.cos(a), r * np.sin(a)])


def mc_fraction(hits: int, total: int) -> tuple[float, float]:
    """Estimate and 3-sigma half-width of a binomial proportion."""
    p = hits / total
    return p, 3.0 * math.sqrt(max(p * (1 - p), 1.0 / total) / total)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran in this session."""
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[i])
