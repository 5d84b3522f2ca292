"""A tiny SVG writer for planar pictures (curves, polygons, lines)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Canvas:
    lo: np.ndarray
    hi: np.ndarray
    size: int = 400
    items: list[str] = field(default_factory=list)

    @classmethod
    def fit(cls, points: np.ndarray, size: int = 400, margin: float = 0.05) -> "Canvas":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = float(max(np.max(hi - lo), 1e-9))
        mid = 0.5 * (lo + hi)
        half = 0.5 * span * (1 + 2 * margin)
        return cls(mid - half, mid + half, size)

    def _xy(self, p) -> tuple[float, float]:
        s = self.size / float(np.max(self.hi - self.lo))
        return (p[0] - self.lo[0]) * s, self.size - (p[1] - self.lo[1]) * s

    def _pts(self, pts) -> str:
        return " ".join("%.3f,%.3f" % self._xy(p) for p in np.asarray(pts, dtype=float))

    def polyline(self, pts, stroke="black", width=1.0):
        self.items.append(f'<polyline points="{self._pts(pts)}" fill="none" stroke="{stroke}" stroke-width="{width}"/>')

    def polygon(self, pts, stroke="black", fill="none", width=1.0):
        self.items.append(f'<polygon points="{self._pts(pts)}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>')

    def circle(self, center, radius, stroke="black", fill="none"):
        x, y = self._xy(center)
        rr = radius * self.size / float(np.max(self.hi - self.lo))
        self.items.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{rr:.3f}" fill="{fill}" stroke="{stroke}"/>')

    def line(self, normal, offset, stroke="black", width=1.0):
        """Clip the line <x, normal> = offset to the canvas and draw it."""
        v = np.asarray(normal, dtype=float)
        u = np.array([-v[1], v[0]])
        c = 0.5 * (self.lo + self.hi)
        base = c + (offset - c @ v) * v
        reach = float(np.linalg.norm(self.hi - self.lo))
        self.polyline([base - reach * u, base + reach * u], stroke=stroke, width=width)

    def render(self) -> str:
        body = "\n  ".join(self.items)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
            f'viewBox="0 0 {self.size} {self.size}">\n  {body}\n</svg>\n'
        )
