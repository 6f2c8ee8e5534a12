"""cs paths (unit arcs + segments) and densely sampled smooth paths."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import (EPS_GEOM, LEFT, RIGHT, Arc, DirectedPoint, Element, GeometryError, Line,
                       RigidMotion, arc_from, line_from, transform_element, wrap_angle)

ZERO_TOL = 1e-10
CONTINUITY_TOL = 1e-9


class PathError(ValueError):
    """Invalid path construction or input."""


class InsufficientData(PathError):
    pass


def _end_pose(e: Element) -> DirectedPoint:
    p = e.end_point
    return DirectedPoint(float(p[0]), float(p[1]), e.end_heading)


@dataclass(frozen=True)
class CsPath:
    """A G1 chain of unit arcs and segments starting at ``start``."""

    start: DirectedPoint
    elements: Tuple[Element, ...] = ()
    endpoint_tolerance: float = CONTINUITY_TOL

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        pose = self.start
        for i, e in enumerate(self.elements):
            gap = float(np.hypot(*(e.start_point - pose.point)))
            dth = abs(wrap_angle(e.start_heading - pose.theta))
            if gap > self.endpoint_tolerance or dth > self.endpoint_tolerance:
                raise PathError(f"element {i} breaks G1 continuity (gap={gap:.3g}, dtheta={dth:.3g})")
            pose = _end_pose(e)

    @classmethod
    def from_steps(cls, start: DirectedPoint, steps: Iterable[Tuple[str, float]],
                   drop_tol: float = ZERO_TOL) -> "CsPath":
        """Build from relative steps ``("L"|"R", sweep)`` / ``("S", length)``.

        Components with magnitude below ``drop_tol`` are dropped.
        """
        pose = start
        out: List[Element] = []
        for kind, value in steps:
            value = float(value)
            if value < -drop_tol:
                raise PathError(f"negative component {kind}{value}")
            if value <= drop_tol:
                continue
            if kind == "S":
                e = line_from(pose, value)
            elif kind in ("L", "R"):
                e = arc_from(pose, LEFT if kind == "L" else RIGHT, value)
            else:
                raise PathError(f"unknown component {kind!r}")
            out.append(e)
            pose = _end_pose(e)
        return cls(start, tuple(out))

    @property
    def steps(self) -> List[Tuple[str, float]]:
        out = []
        for e in self.elements:
            if isinstance(e, Line):
                out.append(("S", e.length))
            else:
                out.append(("L" if e.sweep > 0 else "R", abs(e.sweep)))
        return out

    @property
    def end(self) -> DirectedPoint:
        if not self.elements:
            return self.start
        return _end_pose(self.elements[-1])

    @property
    def complexity(self) -> int:
        return len(self.elements)

    @property
    def word(self) -> str:
        return "".join(k for k, _ in self.steps)

    @property
    def length(self) -> float:
        return float(sum(e.length for e in self.elements))

    @property
    def turning(self) -> float:
        """Signed total turning (ccw positive)."""
        return float(sum(e.turning for e in self.elements))

    @property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum([e.length for e in self.elements])])

    def locate(self, s: float) -> Tuple[int, float]:
        offs = self.offsets
        i = int(np.clip(np.searchsorted(offs, s, side="right") - 1, 0, len(self.elements) - 1))
        return i, s - offs[i]

    def point_at(self, s: float) -> np.ndarray:
        i, t = self.locate(s)
        return self.elements[i].point_at(t)

    def pose_at(self, s: float) -> DirectedPoint:
        i, t = self.locate(s)
        e = self.elements[i]
        p = e.point_at(t)
        return DirectedPoint(float(p[0]), float(p[1]), float(e.heading_at(t)))

    def concat(self, other: "CsPath") -> "CsPath":
        return CsPath(self.start, self.elements + other.elements)

    def transformed(self, g: RigidMotion) -> "CsPath":
        return CsPath(g.apply(self.start), tuple(transform_element(g, e) for e in self.elements))

    def canonical(self, tol: float = 1e-9) -> "CsPath":
        """Merge consecutive segments and consecutive same-circle arcs."""
        steps: List[List] = []
        for kind, v in self.steps:
            if steps and steps[-1][0] == kind:
                steps[-1][1] += v
            else:
                steps.append([kind, v])
        return CsPath.from_steps(self.start, [tuple(s) for s in steps])

    def __len__(self):
        return len(self.elements)


def length(path: CsPath) -> float:
    return path.length


@dataclass(frozen=True)
class SampledPath:
    """Arc-length samples of a C1 path with lifted (unwrapped) headings."""

    s: np.ndarray
    points: np.ndarray
    headings: np.ndarray
    step_bound: float = 0.01

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        hd = np.asarray(self.headings, dtype=float)
        if not (len(s) == len(pts) == len(hd)):
            raise PathError("sample arrays differ in length")
        if len(s) and abs(s[0]) > 1e-12:
            raise PathError("arc length must start at 0")
        if len(s) > 1 and np.any(np.diff(s) <= 0):
            raise PathError("arc lengths must be strictly increasing")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "headings", hd)

    def __len__(self):
        return len(self.s)

    @property
    def length(self) -> float:
        return float(self.s[-1])

    @property
    def start(self) -> DirectedPoint:
        return DirectedPoint(self.points[0, 0], self.points[0, 1], self.headings[0])

    @property
    def end(self) -> DirectedPoint:
        return DirectedPoint(self.points[-1, 0], self.points[-1, 1], self.headings[-1])

    @property
    def turning(self) -> float:
        return float(self.headings[-1] - self.headings[0])

    def slice(self, i: int, j: int) -> "SampledPath":
        """Samples ``i..j`` inclusive, re-based to start at arc length 0."""
        return SampledPath(self.s[i:j + 1] - self.s[i], self.points[i:j + 1],
                           self.headings[i:j + 1], self.step_bound)

    @classmethod
    def concatenate(cls, parts: Sequence["SampledPath"]) -> "SampledPath":
        s, pts, hd = [parts[0].s], [parts[0].points], [parts[0].headings]
        off = parts[0].s[-1]
        lift = parts[0].headings[-1]
        for p in parts[1:]:
            # shared junction sample is dropped; heading lift is carried over
            shift = lift - p.headings[0]
            shift = 2 * math.pi * round(shift / (2 * math.pi))
            s.append(p.s[1:] + off)
            pts.append(p.points[1:])
            hd.append(p.headings[1:] + shift)
            off += p.s[-1]
            lift = p.headings[-1] + shift
        return cls(np.concatenate(s), np.concatenate(pts), np.concatenate(hd),
                   max(p.step_bound for p in parts))

    def to_json(self) -> dict:
        return {"step_bound": self.step_bound,
                "samples": [[float(a), float(p[0]), float(p[1]), float(h)]
                            for a, p, h in zip(self.s, self.points, self.headings)]}

    @classmethod
    def from_json(cls, d: dict) -> "SampledPath":
        arr = np.asarray(d["samples"], dtype=float)
        return cls(arr[:, 0], arr[:, 1:3], arr[:, 3], float(d.get("step_bound", 0.01)))


def sample_path(path: CsPath, step: float) -> SampledPath:
    """Sample with spacing <= ``step``; every element junction is a sample."""
    if not step > 0:
        raise PathError("step must be positive")
    if not path.elements:
        p = path.start
        return SampledPath(np.array([0.0]), p.point[None, :], np.array([p.theta]), step)
    s_all, pts, hd = [np.array([0.0])], [path.start.point[None, :]], [np.array([path.start.theta])]
    off, lift = 0.0, path.start.theta
    for e in path.elements:
        n = max(1, int(math.ceil(e.length / step - 1e-12)))
        t = np.linspace(0.0, e.length, n + 1)[1:]
        s_all.append(off + t)
        pts.append(e.point_at(t))
        hd.append(lift + (e.turning * t / e.length if isinstance(e, Arc) else 0.0 * t))
        off += e.length
        lift += e.turning
    return SampledPath(np.concatenate(s_all), np.concatenate(pts), np.concatenate(hd), step)


@dataclass
class ValidityReport:
    speed_residual: float
    max_curvature: float
    violations: List[int]
    endpoints_ok: bool
    valid: bool
    curvature: np.ndarray = field(repr=False, default=None)


def three_point_curvature(points: np.ndarray) -> np.ndarray:
    """Unsigned curvature of the circle through each consecutive triple."""
    a = points[1:-1] - points[:-2]
    b = points[2:] - points[1:-1]
    c = points[2:] - points[:-2]
    area2 = np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    denom = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1) * np.linalg.norm(c, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(denom > 0, 2.0 * area2 / denom, 0.0)
    return k


def validate_bounded_curvature(path: SampledPath, tol: float = 1e-3,
                               start: Optional[DirectedPoint] = None,
                               end: Optional[DirectedPoint] = None,
                               speed_tol: Optional[float] = None,
                               endpoint_tol: float = 1e-6) -> ValidityReport:
    """Check unit speed, curvature <= 1 + tol and the declared endpoints."""
    if len(path) < 3:
        raise InsufficientData("need at least 3 samples")
    ds = np.diff(path.s)
    chord = np.linalg.norm(np.diff(path.points, axis=0), axis=1)
    speed_res = float(np.max(np.abs(chord / ds - 1.0)))
    if speed_tol is None:
        speed_tol = max(1e-6, path.step_bound ** 2)

    # near-coincident samples make the circumcircle ill-conditioned
    min_sep = min(1e-4, 0.25 * path.step_bound)
    keep = [0]
    for i in range(1, len(path) - 1):
        if path.s[i] - path.s[keep[-1]] >= min_sep:
            keep.append(i)
    if path.s[-1] - path.s[keep[-1]] < min_sep and len(keep) > 1:
        keep.pop()
    keep.append(len(path) - 1)
    keep = np.asarray(keep)
    curv = np.zeros(len(path))
    if len(keep) >= 3:
        curv[keep[1:-1]] = three_point_curvature(path.points[keep])
    violations = [int(i) for i in np.nonzero(curv > 1.0 + tol)[0]]
    ends_ok = True
    if start is not None:
        ends_ok &= path.start.is_close(start, endpoint_tol)
    if end is not None:
        ends_ok &= path.end.is_close(end, endpoint_tol)
    valid = not violations and ends_ok and speed_res <= speed_tol
    return ValidityReport(speed_res, float(curv.max()), violations, bool(ends_ok), bool(valid), curv)


# ---------------------------------------------------------------- JSON

def path_to_json(path: CsPath) -> dict:
    els = []
    for kind, v in path.steps:
        if kind == "S":
            els.append({"type": "line", "length": v})
        else:
            els.append({"type": "arc", "orientation": kind, "sweep": v})
    s = path.start
    return {"start": {"x": s.x, "y": s.y, "theta": s.theta}, "elements": els}


def path_from_json(d) -> CsPath:
    if isinstance(d, str):
        d = json.loads(d)
    try:
        st = d["start"]
        start = DirectedPoint(float(st["x"]), float(st["y"]), float(st["theta"]))
        steps = []
        for i, e in enumerate(d["elements"]):
            if e["type"] == "line":
                steps.append(("S", float(e["length"])))
            elif e["type"] == "arc":
                if e["orientation"] not in ("L", "R"):
                    raise PathError(f"elements[{i}].orientation must be L or R")
                steps.append((e["orientation"], float(e["sweep"])))
            else:
                raise PathError(f"elements[{i}].type must be arc or line")
    except (KeyError, TypeError) as exc:
        raise PathError(f"malformed path JSON: missing {exc}") from exc
    return CsPath.from_steps(start, steps, drop_tol=0.0)


# ---------------------------------------------------------------- crossings

def _pieces(elements: Sequence[Element], max_sweep: float = math.pi / 2) -> List[Element]:
    out = []
    for e in elements:
        if isinstance(e, Arc) and abs(e.sweep) > max_sweep:
            n = int(math.ceil(abs(e.sweep) / max_sweep))
            d = e.sweep / n
            sgn = 1.0 if e.sweep > 0 else -1.0
            for k in range(n):
                out.append(Arc(e.cx, e.cy, e.start_angle + sgn * k * abs(d), d))
        else:
            out.append(e)
    return out


def _arc_param(a: Arc, p, tol: float) -> Optional[float]:
    phi = math.atan2(p[1] - a.cy, p[0] - a.cx)
    sgn = 1.0 if a.sweep > 0 else -1.0
    t = (sgn * (phi - a.start_angle)) % (2 * math.pi)
    if t > 2 * math.pi - tol:
        t -= 2 * math.pi
    if -tol <= t <= abs(a.sweep) + tol:
        return min(max(t, 0.0), abs(a.sweep))
    return None


def _line_param(l: Line, p, tol: float) -> Optional[float]:
    t = float(np.dot(p - l.start_point, l.direction))
    if -tol <= t <= l.length + tol and np.hypot(*(l.point_at(t) - p)) <= 10 * tol:
        return min(max(t, 0.0), l.length)
    return None


def _param(e: Element, p, tol: float):
    return _arc_param(e, p, tol) if isinstance(e, Arc) else _line_param(e, p, tol)


def _contacts(e1: Element, e2: Element, tol: float):
    """Point contacts ``(t1, t2)`` and overlaps ``((a1,b1),(a2,b2),sigma)``."""
    points, overlaps = [], []
    if isinstance(e1, Line) and isinstance(e2, Line):
        d, f = e1.direction, e2.direction
        den = d[0] * f[1] - d[1] * f[0]
        w = e2.start_point - e1.start_point
        if abs(den) < 1e-12:
            if abs(w[0] * d[1] - w[1] * d[0]) > tol:
                return points, overlaps
            sig = 1.0 if np.dot(d, f) > 0 else -1.0
            u0 = float(np.dot(w, d))
            u1 = u0 + sig * e2.length
            lo, hi = max(0.0, min(u0, u1)), min(e1.length, max(u0, u1))
            if hi - lo > tol:
                t2 = [sig * (lo - u0), sig * (hi - u0)]
                overlaps.append(((lo, hi), (min(t2), max(t2)), sig))
            elif hi - lo >= -tol:
                m = 0.5 * (lo + hi)
                points.append((m, min(max(sig * (m - u0), 0.0), e2.length)))
            return points, overlaps
        t = (w[0] * f[1] - w[1] * f[0]) / den
        u = (w[0] * d[1] - w[1] * d[0]) / den
        if -tol <= t <= e1.length + tol and -tol <= u <= e2.length + tol:
            points.append((min(max(t, 0.0), e1.length), min(max(u, 0.0), e2.length)))
        return points, overlaps
    if isinstance(e1, Arc) and isinstance(e2, Line):
        pts, ovs = _contacts(e2, e1, tol)
        return [(b, a) for a, b in pts], [(b, a, s) for a, b, s in ovs]
    if isinstance(e1, Line):  # line vs arc
        c = e2.center
        d = e1.direction
        w = e1.start_point - c
        bq = float(np.dot(d, w))
        cq = float(np.dot(w, w)) - 1.0
        disc = bq * bq - cq
        if disc < -tol:
            return points, overlaps
        roots = [-bq] if disc <= tol else [-bq - math.sqrt(disc), -bq + math.sqrt(disc)]
        for t in roots:
            if -tol <= t <= e1.length + tol:
                p = e1.point_at(min(max(t, 0.0), e1.length))
                u = _arc_param(e2, p, 1e-7)
                if u is not None:
                    points.append((min(max(t, 0.0), e1.length), u))
        return points, overlaps
    # arc vs arc
    dc = e2.center - e1.center
    dist = float(np.hypot(*dc))
    if dist <= tol:
        sig = 1.0 if e1.sweep * e2.sweep > 0 else -1.0
        # walk e2 expressed in e1's parameter
        sgn1 = 1.0 if e1.sweep > 0 else -1.0
        base = (sgn1 * (e2.start_angle - e1.start_angle)) % (2 * math.pi)
        for shift in (-2 * math.pi, 0.0, 2 * math.pi):
            u0 = base + shift
            u1 = u0 + sig * abs(e2.sweep)
            lo, hi = max(0.0, min(u0, u1)), min(abs(e1.sweep), max(u0, u1))
            if hi - lo > tol:
                t2 = [sig * (lo - u0), sig * (hi - u0)]
                overlaps.append(((lo, hi), (min(t2), max(t2)), sig))
            elif hi - lo >= -tol:
                m = 0.5 * (lo + hi)
                points.append((m, min(max(sig * (m - u0), 0.0), abs(e2.sweep))))
        return points, overlaps
    if dist > 2.0 + tol:
        return points, overlaps
    ex = dc / dist
    if abs(dist - 2.0) <= tol:
        cands = [e1.center + ex]
    else:
        a = dist / 2.0
        h = math.sqrt(max(0.0, 1.0 - a * a))
        m = e1.center + a * ex
        n = np.array([-ex[1], ex[0]])
        cands = [m + h * n, m - h * n]
    for p in cands:
        t1 = _arc_param(e1, p, 1e-7)
        t2 = _arc_param(e2, p, 1e-7)
        if t1 is not None and t2 is not None:
            points.append((t1, t2))
    return points, overlaps


class _Curve:
    def __init__(self, elements: Sequence[Element], closed: bool):
        self.pieces = _pieces(elements)
        self.offsets = np.concatenate([[0.0], np.cumsum([e.length for e in self.pieces])])
        self.total = float(self.offsets[-1])
        self.closed = closed

    def norm(self, t: float) -> Optional[float]:
        if self.closed:
            t = t % self.total
            if self.total - t < 1e-9:
                t = 0.0
            return t
        if t < 0 or t > self.total:
            return None
        return t

    def eval(self, t: float):
        t = self.norm(t)
        if t is None:
            return None
        i = int(np.clip(np.searchsorted(self.offsets, t, side="right") - 1, 0, len(self.pieces) - 1))
        e = self.pieces[i]
        u = t - self.offsets[i]
        p = e.point_at(u)
        th = float(e.heading_at(u))
        return np.asarray(p, dtype=float), np.array([math.cos(th), math.sin(th)])

    def same_location(self, t1: float, t2: float, tol: float) -> bool:
        d = abs(t1 - t2)
        if self.closed:
            d = min(d, self.total - d)
        return d <= tol


def _side(curve: _Curve, tp: float, tq: float) -> int:
    a = curve.eval(tp)
    b = curve.eval(tq)
    if a is None or b is None:
        return 0
    v = b[0] - a[0]
    c = a[1][0] * v[1] - a[1][1] * v[0]
    if abs(c) < 1e-13:
        return 0
    return 1 if c > 0 else -1


def _count_crossings(elements: Sequence[Element], closed: bool, tol: float = 1e-9,
                     probe: float = 1e-3) -> int:
    curve = _Curve(elements, closed)
    if curve.total <= 0:
        return 0
    offs = curve.offsets
    pts, ovs = [], []
    n = len(curve.pieces)
    for i in range(n):
        for j in range(i, n):
            if i == j:
                continue
            P, O = _contacts(curve.pieces[i], curve.pieces[j], tol)
            for t1, t2 in P:
                g1, g2 = curve.norm(offs[i] + t1), curve.norm(offs[j] + t2)
                if not curve.same_location(g1, g2, 1e-7):
                    pts.append((min(g1, g2), max(g1, g2)))
            for (a1, b1), (a2, b2), sig in O:
                ovs.append([offs[i] + a1, offs[i] + b1, offs[j] + a2, offs[j] + b2, sig])

    # merge overlap pieces that continue each other
    ovs.sort()
    merged: List[List[float]] = []
    for o in ovs:
        for m in merged:
            if m[4] != o[4]:
                continue
            if abs(o[0] - m[1]) <= 1e-7 and (
                    (o[4] > 0 and abs(o[2] - m[3]) <= 1e-7) or (o[4] < 0 and abs(o[3] - m[2]) <= 1e-7)):
                m[1] = o[1]
                if o[4] > 0:
                    m[3] = o[3]
                else:
                    m[2] = o[2]
                break
        else:
            merged.append(list(o))

    def near_overlap(g1, g2):
        for a1, b1, a2, b2, _ in merged:
            for u, v in ((g1, g2), (g2, g1)):
                if a1 - 1e-7 <= u <= b1 + 1e-7 and a2 - 1e-7 <= v <= b2 + 1e-7:
                    return True
        return False

    uniq: List[Tuple[float, float]] = []
    for g1, g2 in sorted(pts):
        if any(abs(g1 - u1) <= 1e-7 and abs(g2 - u2) <= 1e-7 for u1, u2 in uniq):
            continue
        if closed and any(curve.same_location(g1, u1, 1e-7) and curve.same_location(g2, u2, 1e-7)
                          or curve.same_location(g1, u2, 1e-7) and curve.same_location(g2, u1, 1e-7)
                          for u1, u2 in uniq):
            continue
        if near_overlap(g1, g2):
            continue
        uniq.append((g1, g2))

    count = 0
    for g1, g2 in uniq:
        e1, e2 = curve.eval(g1), curve.eval(g2)
        if abs(e1[1][0] * e2[1][1] - e1[1][1] * e2[1][0]) > 1e-6:
            count += 1
            continue
        sig = 1 if np.dot(e1[1], e2[1]) > 0 else -1
        before = _side(curve, g1 - probe, g2 - probe if sig > 0 else g2 + probe)
        after = _side(curve, g1 + probe, g2 + probe if sig > 0 else g2 - probe)
        if before and after and before != after:
            count += 1
    for a1, b1, a2, b2, sig in merged:
        before = _side(curve, a1 - probe, a2 - probe if sig > 0 else b2 + probe)
        after = _side(curve, b1 + probe, b2 + probe if sig > 0 else a2 - probe)
        if before and after and before != after:
            count += 1
    return count


def transversal_crossings(path: CsPath, closure: CsPath) -> int:
    """Crossings of the closed curve ``path`` + ``closure`` in general position.

    Tangential contacts are resolved as an infinitesimal normal perturbation
    would: they count only where the two branches swap sides.
    """
    if not path.end.is_close(closure.start, 1e-7) or not closure.end.is_close(path.start, 1e-7):
        raise PathError("path and closure do not form a closed curve")
    return _count_crossings(path.elements + closure.elements, closed=True)


def closed_crossings(path: CsPath) -> int:
    """Crossings of a path that is already closed."""
    if not path.end.is_close(path.start, 1e-7):
        raise PathError("path is not closed")
    return _count_crossings(path.elements, closed=True)


def self_crossings(path: CsPath) -> int:
    """Crossings of an open cs path with itself."""
    return _count_crossings(path.elements, closed=False)
