"""Static SVG figures: paths, adjacent circles, region masks, filmstrips."""
from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

from .cspath import CsPath, SampledPath, sample_path
from .geometry import LEFT, RIGHT, DirectedPoint, adjacent_center
from .proximity import OmegaRegion

PX_PER_UNIT = 50.0
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class Figure:
    """Accumulates shapes in world coordinates; y points up."""

    def __init__(self, scale: float = PX_PER_UNIT, pad: float = 0.5):
        self.scale = scale
        self.pad = pad
        self._items: List[Tuple[str, np.ndarray]] = []  # (svg fragment template, world points)
        self._lo = np.array([np.inf, np.inf])
        self._hi = -self._lo

    def _grow(self, pts):
        pts = np.atleast_2d(pts)
        self._lo = np.minimum(self._lo, pts.min(axis=0))
        self._hi = np.maximum(self._hi, pts.max(axis=0))

    def polyline(self, pts, color="#000", width=1.5, dash: Optional[str] = None):
        pts = np.asarray(pts, dtype=float)
        self._grow(pts)
        self._items.append(("polyline", (pts, color, width, dash)))

    def path(self, path, color="#000", width=1.5, step=0.02):
        sp = path if isinstance(path, SampledPath) else sample_path(path, step)
        self.polyline(sp.points, color, width)

    def circle(self, c, r=1.0, color="#888", dash="4,3"):
        c = np.asarray(c, dtype=float)
        self._grow([c - r, c + r])
        self._items.append(("circle", (c, r, color, dash)))

    def directed_point(self, p: DirectedPoint, color="#000", label: str = ""):
        tip = p.point + 0.4 * p.direction
        self._grow([p.point, tip])
        self._items.append(("arrow", (p.point, tip, color, label)))

    def adjacent_circles(self, x: DirectedPoint, y: DirectedPoint):
        for p in (x, y):
            self.circle(adjacent_center(p, LEFT), color="#2ca02c")
            self.circle(adjacent_center(p, RIGHT), color="#d62728")

    def mask(self, omega: OmegaRegion, color="#ffdd66"):
        cells = omega.cell_centers()
        if len(cells):
            self._grow(cells)
        self._items.append(("mask", (cells, omega.resolution, color)))

    def _xy(self, pts):
        pts = np.atleast_2d(pts)
        x = (pts[:, 0] - self._lo[0] + self.pad) * self.scale
        y = (self._hi[1] - pts[:, 1] + self.pad) * self.scale
        return x, y

    def render(self, title: str = "") -> str:
        if not np.all(np.isfinite(self._lo)):
            self._lo = np.zeros(2)
            self._hi = np.ones(2)
        w, h = (self._hi - self._lo + 2 * self.pad) * self.scale
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
               f'width="{w:.0f}" height="{h:.0f}" viewBox="0 0 {w:.1f} {h:.1f}">',
               '<rect width="100%" height="100%" fill="white"/>']
        if title:
            out.append(f'<title>{escape(title)}</title>')
        s = self.scale
        for kind, args in self._items:
            if kind == "mask":
                cells, res, color = args
                if len(cells):
                    xs, ys = self._xy(cells - res / 2 * np.array([1, -1]))
                    rects = "".join(f'<rect x="{a:.2f}" y="{b:.2f}" width="{res * s:.2f}" '
                                    f'height="{res * s:.2f}"/>' for a, b in zip(xs, ys))
                    out.append(f'<g fill="{color}" stroke="none">{rects}</g>')
            elif kind == "circle":
                c, r, color, dash = args
                cx, cy = self._xy(c)
                d = f' stroke-dasharray="{dash}"' if dash else ""
                out.append(f'<circle cx="{cx[0]:.2f}" cy="{cy[0]:.2f}" r="{r * s:.2f}" '
                           f'fill="none" stroke="{color}"{d}/>')
            elif kind == "polyline":
                pts, color, width, dash = args
                xs, ys = self._xy(pts)
                coords = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(xs, ys))
                d = f' stroke-dasharray="{dash}"' if dash else ""
                out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                           f'stroke-width="{width}"{d}/>')
            elif kind == "arrow":
                p, tip, color, label = args
                (x0, x1), (y0, y1) = self._xy(np.array([p, tip]))
                out.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
                           f'stroke="{color}" stroke-width="2"/>')
                out.append(f'<circle cx="{x0:.2f}" cy="{y0:.2f}" r="3" fill="{color}"/>')
                if label:
                    out.append(f'<text x="{x0 + 5:.2f}" y="{y0 - 5:.2f}" font-size="12">'
                               f'{escape(label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def endpoints_figure(x: DirectedPoint, y: DirectedPoint, paths: Iterable = (),
                     omega: Optional[OmegaRegion] = None) -> Figure:
    fig = Figure()
    if omega is not None:
        fig.mask(omega)
    fig.adjacent_circles(x, y)
    for i, p in enumerate(paths):
        fig.path(p, PALETTE[i % len(PALETTE)])
    fig.directed_point(x, label="x")
    fig.directed_point(y, label="y")
    return fig


def filmstrip(frames: Sequence[SampledPath], count: int = 6) -> str:
    """Overlay of evenly chosen frames, fading from light to dark."""
    fig = Figure()
    idx = np.unique(np.linspace(0, len(frames) - 1, min(count, len(frames))).round().astype(int))
    for n, i in enumerate(idx):
        g = int(200 - 200 * n / max(1, len(idx) - 1))
        fig.polyline(frames[i].points, f"rgb({g},{g},{255 if n == len(idx) - 1 else g})")
    fig.directed_point(frames[0].start, label="start")
    fig.directed_point(frames[0].end, label="end")
    return fig.render("deformation")
