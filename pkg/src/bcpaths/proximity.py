"""Proximity of adjacent circles and the close-endpoint subcases."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

from .cspath import CsPath
from .geometry import (EPS_GEOM, LEFT, RIGHT, TWO_PI, DirectedPoint, GeometryError, adjacent_center,
                       mod2pi)

_ONAME = {LEFT: "L", RIGHT: "R"}


@dataclass(frozen=True)
class SingleArc:
    orientation: int
    center: Tuple[float, float]
    sweep: float
    boundary: bool = False

    def path(self, x: DirectedPoint) -> CsPath:
        return CsPath.from_steps(x, [(_ONAME[self.orientation], self.sweep)])


@dataclass(frozen=True)
class TwoArc:
    orientations: Tuple[int, int]
    centers: Tuple[Tuple[float, float], Tuple[float, float]]
    sweeps: Tuple[float, float]

    def path(self, x: DirectedPoint) -> CsPath:
        return CsPath.from_steps(x, [(_ONAME[o], s) for o, s in zip(self.orientations, self.sweeps)])


@dataclass
class OmegaRegion:
    """Grid mask of a bounded free component between the adjacent disks.

    Cell ``[j, i]`` has center ``(x0 + (i + 0.5) * res, y0 + (j + 0.5) * res)``.
    """

    bbox: Tuple[float, float, float, float]
    resolution: float
    mask: np.ndarray = field(repr=False)
    centers: Tuple[Tuple[float, float], ...] = ()
    anchors: Tuple[Tuple[float, float], ...] = ()  # x and y
    reach: float = 0.0

    @property
    def area(self) -> float:
        return float(self.mask.sum()) * self.resolution ** 2

    def cell_index(self, pts) -> Tuple[np.ndarray, np.ndarray]:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        i = np.floor((pts[:, 0] - self.bbox[0]) / self.resolution).astype(int)
        j = np.floor((pts[:, 1] - self.bbox[1]) / self.resolution).astype(int)
        return i, j

    def contains(self, pts, dilate: int = 0) -> np.ndarray:
        m = self.mask
        if dilate:
            m = ndimage.binary_dilation(m, iterations=dilate)
        i, j = self.cell_index(pts)
        ny, nx = m.shape
        inside = (i >= 0) & (i < nx) & (j >= 0) & (j < ny)
        out = np.zeros(len(i), dtype=bool)
        out[inside] = m[j[inside], i[inside]]
        return out

    def cell_centers(self) -> np.ndarray:
        j, i = np.nonzero(self.mask)
        return np.stack([self.bbox[0] + (i + 0.5) * self.resolution,
                         self.bbox[1] + (j + 0.5) * self.resolution], axis=1)

    @property
    def diameter(self) -> float:
        """Upper bound on the diameter of the region (mask bounding box diagonal)."""
        c = self.cell_centers()
        if not len(c):
            return 0.0
        ext = c.max(axis=0) - c.min(axis=0) + 2 * self.resolution
        return float(np.hypot(*ext))

    def to_json(self) -> dict:
        return {"bbox": list(self.bbox), "resolution": self.resolution, "area": self.area,
                "cells": int(self.mask.sum()), "shape": list(self.mask.shape)}


@dataclass
class ProximityReport:
    centers: Dict[str, Tuple[float, float]]
    d_ll: float
    d_rr: float
    raw_condition: str
    condition: str
    d_subcase: Optional[str] = None
    omega: Optional[OmegaRegion] = None
    boundary: bool = False
    single_arc: Optional[SingleArc] = None
    two_arc: Optional[TwoArc] = None
    witness: Optional[CsPath] = None
    witness_failed: bool = False

    def isolated_path(self, x: DirectedPoint) -> Optional[CsPath]:
        if self.single_arc is not None:
            return self.single_arc.path(x)
        if self.two_arc is not None:
            return self.two_arc.path(x)
        return None

    def to_json(self) -> dict:
        from .cspath import path_to_json
        out = {"centers": {k: list(v) for k, v in self.centers.items()},
               "dLL": self.d_ll, "dRR": self.d_rr, "rawCondition": self.raw_condition,
               "condition": self.condition, "dSubcase": self.d_subcase, "boundary": self.boundary}
        if self.omega is not None:
            out["omega"] = self.omega.to_json()
        if self.single_arc is not None:
            out["singleArc"] = {"orientation": _ONAME[self.single_arc.orientation],
                                "center": list(self.single_arc.center), "sweep": self.single_arc.sweep}
        if self.two_arc is not None:
            out["twoArc"] = {"orientations": [_ONAME[o] for o in self.two_arc.orientations],
                             "centers": [list(c) for c in self.two_arc.centers],
                             "sweeps": list(self.two_arc.sweeps)}
        if self.witness is not None:
            out["witness"] = path_to_json(self.witness)
        if self.witness_failed:
            out["witnessFailed"] = True
        return out


def center_distances(x: DirectedPoint, y: DirectedPoint):
    c = {"lx": adjacent_center(x, LEFT), "rx": adjacent_center(x, RIGHT),
         "ly": adjacent_center(y, LEFT), "ry": adjacent_center(y, RIGHT)}
    d_ll = float(np.hypot(*(c["ly"] - c["lx"])))
    d_rr = float(np.hypot(*(c["ry"] - c["rx"])))
    return c, d_ll, d_rr


def raw_condition(d_ll: float, d_rr: float) -> str:
    far_l, far_r = d_ll >= 4.0, d_rr >= 4.0
    if far_l and far_r:
        return "i"
    if far_r:
        return "ii"
    if far_l:
        return "iii"
    return "iv"


def _is_iv(x, y) -> bool:
    _, a, b = center_distances(x, y)
    return raw_condition(a, b) == "iv"


def detect_single_arc(x: DirectedPoint, y: DirectedPoint, eps: float = EPS_GEOM) -> Optional[SingleArc]:
    if not _is_iv(x, y):
        return None
    for o in (LEFT, RIGHT):
        c = adjacent_center(x, o)
        if np.hypot(*(adjacent_center(y, o) - c)) > eps:
            continue
        sweep = mod2pi(o * (y.theta - x.theta))
        if sweep <= eps or TWO_PI - sweep <= eps:
            continue
        boundary = abs(sweep - math.pi) <= eps
        if sweep < math.pi - eps:
            return SingleArc(o, (float(c[0]), float(c[1])), sweep, boundary)
    return None


def detect_two_arc(x: DirectedPoint, y: DirectedPoint, eps: float = EPS_GEOM) -> Optional[TwoArc]:
    if not _is_iv(x, y):
        return None
    for o1 in (LEFT, RIGHT):
        o2 = -o1
        c1 = adjacent_center(x, o1)
        c2 = adjacent_center(y, o2)
        v = c2 - c1
        if abs(float(np.hypot(*v)) - 2.0) > eps:
            continue
        h = math.atan2(v[1], v[0]) + o1 * math.pi / 2
        s1 = mod2pi(o1 * (h - x.theta))
        s2 = mod2pi(o2 * (y.theta - h))
        if eps < s1 < math.pi - eps and eps < s2 < math.pi - eps:
            return TwoArc((o1, o2), ((float(c1[0]), float(c1[1])), (float(c2[0]), float(c2[1]))),
                          (s1, s2))
    return None


def free_space_grid(centers, bbox, resolution):
    x0, y0, x1, y1 = bbox
    nx = max(1, int(math.ceil((x1 - x0) / resolution)))
    ny = max(1, int(math.ceil((y1 - y0) / resolution)))
    xs = x0 + (np.arange(nx) + 0.5) * resolution
    ys = y0 + (np.arange(ny) + 0.5) * resolution
    X, Y = np.meshgrid(xs, ys)
    free = np.ones_like(X, dtype=bool)
    for c in centers:
        free &= (X - c[0]) ** 2 + (Y - c[1]) ** 2 >= 1.0
    return free


def detect_omega(x: DirectedPoint, y: DirectedPoint, resolution: float = 0.01, pad: float = 3.0,
                 bbox: Optional[Tuple[float, float, float, float]] = None) -> Optional[OmegaRegion]:
    """Bounded free component reached from both x's forward and y's backward cusp.

    The free set is the complement of the four open adjacent disks. A path
    leaving x must enter the cusp between x's two disks, so seed points are
    taken along the rays x + tX and y - tY for t up to a few cells.
    """
    if not resolution > 0:
        raise GeometryError("resolution must be positive")
    c, _, _ = center_distances(x, y)
    centers = list(c.values())
    if bbox is None:
        pts = np.array(centers)
        bbox = (pts[:, 0].min() - pad, pts[:, 1].min() - pad,
                pts[:, 0].max() + pad, pts[:, 1].max() + pad)
    free = free_space_grid(centers, bbox, resolution)
    labels, _ = ndimage.label(free)  # 4-connectivity
    frontier = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])))

    reach = 2.0 * math.sqrt(resolution) + resolution
    ts = np.linspace(0.25 * resolution, reach, 64)
    probe = OmegaRegion(bbox, resolution, free)

    def seed_labels(p: DirectedPoint, sgn: float):
        pts = p.point[None, :] + sgn * ts[:, None] * p.direction[None, :]
        i, j = probe.cell_index(pts)
        ny, nx = free.shape
        ok = (i >= 0) & (i < nx) & (j >= 0) & (j < ny)
        ls = labels[j[ok], i[ok]]
        return set(int(v) for v in ls if v > 0)

    common = (seed_labels(x, 1.0) & seed_labels(y, -1.0)) - frontier
    if not common:
        return None
    lab = min(common)
    return OmegaRegion(tuple(float(v) for v in bbox), resolution, labels == lab,
                       tuple((float(p[0]), float(p[1])) for p in centers),
                       ((x.x, x.y), (y.x, y.y)), reach)


def c_witness(x: DirectedPoint, y: DirectedPoint) -> Optional[CsPath]:
    """A path from x to y containing an arc >= pi or a segment >= 4."""
    from .dubins import solve_all_variants
    cands = sorted((c for c in solve_all_variants(x, y) if c.feasible), key=lambda c: c.length)
    for c in cands:
        if any((k == "S" and v >= 4.0) or (k != "S" and v >= math.pi) for k, v in c.path.steps):
            return c.path
    if cands:
        base = cands[0]
        return CsPath.from_steps(x, [("L", TWO_PI)] + list(base.steps))
    return None


def classify(x: DirectedPoint, y: DirectedPoint, resolution: float = 0.01, pad: float = 3.0,
             eps: float = EPS_GEOM, with_witness: bool = True,
             bbox: Optional[Tuple[float, float, float, float]] = None) -> ProximityReport:
    c, d_ll, d_rr = center_distances(x, y)
    raw = raw_condition(d_ll, d_rr)
    boundary = abs(d_ll - 4.0) <= eps or abs(d_rr - 4.0) <= eps
    rep = ProximityReport({k: (float(v[0]), float(v[1])) for k, v in c.items()}, d_ll, d_rr, raw,
                          "A" if raw == "i" else "B" if raw in ("ii", "iii") else "C",
                          boundary=boundary)
    if raw != "iv":
        return rep
    sa = detect_single_arc(x, y, eps)
    if sa is not None:
        rep.condition, rep.d_subcase, rep.single_arc = "D", "SingleArc", sa
        rep.boundary |= sa.boundary
        return rep
    ta = detect_two_arc(x, y, eps)
    if ta is not None:
        rep.condition, rep.d_subcase, rep.two_arc = "D", "TwoArc", ta
        return rep
    om = detect_omega(x, y, resolution, pad, bbox)
    if om is not None:
        rep.condition, rep.d_subcase, rep.omega = "D", "OmegaRegion", om
        return rep
    if with_witness:
        rep.witness = c_witness(x, y)
        rep.witness_failed = rep.witness is None
    return rep
