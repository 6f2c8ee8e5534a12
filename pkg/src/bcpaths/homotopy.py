"""Deformations that keep the curvature bound.

Covers fragmentation and replacement paths, the radial and orthogonal
projection flows (with the local Taylor model of their curvature),
normalization of smooth paths to cs form, complexity reduction, and the
discrete moves on cs paths: figure-8 insertion, segment pushes and the
RSL to LSR skew deformation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cspath import (CsPath, PathError, SampledPath, sample_path, three_point_curvature,
                     validate_bounded_curvature)
from .dubins import _csc, candidates_with_turning, solve_all_variants
from .geometry import (EPS_GEOM, LEFT, RIGHT, TWO_PI, Arc, DirectedPoint, GeometryError, Line,
                       adjacent_center, left_normal, unit, wrap_angle)
from .proximity import classify

DELTA_MAX = 0.2
TOL_FRAME = 0.02


class FragmentInvalid(RuntimeError):
    pass


class SingularProjection(GeometryError):
    pass


class CurvatureViolation(RuntimeError):
    def __init__(self, msg, frame=None):
        super().__init__(msg)
        self.frame = frame


class InvalidAxis(ValueError):
    pass


class PushInfeasible(RuntimeError):
    pass


class SkewInfeasible(RuntimeError):
    pass


# ---------------------------------------------------------------- local curvature model

def _ab(p: float, x_offset: float, mirrored: bool):
    u = x_offset + 1.0
    a = 1.0 - p + p / u
    if mirrored:
        b = 0.5 - p / 2 - p / (2 * u * u)
        db = -0.5 - 1.0 / (2 * u * u)
    else:
        b = -0.5 + p / 2 + p * x_offset / (2 * u * u) - p / (2 * u)
        db = 0.5 + x_offset / (2 * u * u) - 1.0 / (2 * u)
    return a, b, db


def radial_curvature(p: float, theta: float, x_offset: float, mirrored: bool = False):
    """Curvature of the second-order model of a radially projected unit arc.

    The arc is tangent to the abscissa's normal at distance ``x_offset + 1``
    from the projection center; ``mirrored`` selects the arc bending away
    from the center (curvature +1 at p = 0). Returns ``(kappa, dkappa/dp)``
    with the derivative taken exactly.
    """
    if x_offset < 0:
        raise ValueError("x_offset must be >= 0")
    _, b, db = _ab(p, x_offset, mirrored)
    q = 4.0 * b * b * theta * theta
    kappa = 2.0 * b / (1.0 + q) ** 1.5
    dk_db = 2.0 * (1.0 - 8.0 * b * b * theta * theta) / (1.0 + q) ** 2.5
    return kappa, dk_db * db


def origin_slope_closed_form(x_offset: float) -> float:
    """Closed-form expression for dkappa/dp at p = 0, theta = 0 as published."""
    x = x_offset
    return 1.0 + x / (2 * (x + 1)) + x / (2 * (x + 1) ** 2)


def radial_map_curvature(p: float, x_offset: float, h: float = 1e-4) -> float:
    """Signed curvature at theta = 0 of the exact radially projected arc.

    Evaluated numerically from the map itself (no Taylor truncation); used to
    cross-check the model above.
    """
    th = np.array([-h, 0.0, h])
    c = np.stack([x_offset + np.cos(th), np.sin(th)], axis=1)
    r = np.linalg.norm(c, axis=1)
    pts = (1 - p + p / r)[:, None] * c
    k = float(three_point_curvature(pts)[0])
    # orientation: cross of consecutive chords
    a, b = pts[1] - pts[0], pts[2] - pts[1]
    return k if a[0] * b[1] - a[1] * b[0] > 0 else -k


# ---------------------------------------------------------------- regions and fragments

def in_region_rz(z: DirectedPoint, pts, tol: float = EPS_GEOM) -> np.ndarray:
    """Inside the unit disk at z and outside both open adjacent disks of z."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    d0 = np.linalg.norm(pts - z.point, axis=1)
    dl = np.linalg.norm(pts - adjacent_center(z, LEFT), axis=1)
    dr = np.linalg.norm(pts - adjacent_center(z, RIGHT), axis=1)
    return (d0 <= 1.0 + tol) & (dl >= 1.0 - tol) & (dr >= 1.0 - tol)


@dataclass(frozen=True)
class Fragmentation:
    times: Tuple[float, ...]
    indices: Tuple[int, ...]
    max_fragment_length: float
    delta: float

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.times)

    def __len__(self):
        return len(self.times) - 1


def fragment(path: SampledPath, target_len: float = 0.9, delta_max: float = DELTA_MAX) -> Fragmentation:
    """Split at samples so each piece has length <= target and heading spread <= delta_max."""
    if not 0 < target_len < 1:
        raise ValueError("target_len must lie in (0, 1)")
    s, h = path.s, path.headings
    var = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(h)))])
    mu = s / target_len + var / delta_max
    m = max(1, int(math.ceil(mu[-1] - 1e-12)))

    def ok(idx):
        for i, j in zip(idx[:-1], idx[1:]):
            if j <= i or s[j] - s[i] > target_len + 1e-12:
                return False
            seg = h[i:j + 1]
            if seg.max() - seg.min() > delta_max + 1e-12:
                return False
        return True

    while True:
        marks = np.linspace(0.0, mu[-1], m + 1)
        idx = [0] + [int(np.searchsorted(mu, v)) for v in marks[1:-1]] + [len(s) - 1]
        idx = sorted(set(idx))
        if ok(idx):
            break
        m += 1
        if m > 10 * len(s):
            raise FragmentInvalid("sampling too coarse to fragment")
    return Fragmentation(tuple(float(s[i]) for i in idx), tuple(idx), target_len, delta_max)


def fragment_condition(zs: DirectedPoint, ze: DirectedPoint, length: float):
    """Proximity report for a fragment, on a grid scaled to its size."""
    res = max(1e-3, min(0.01, length * length / 50.0))
    pad = max(0.5 * length, 10 * res)
    bbox = (min(zs.x, ze.x) - pad, min(zs.y, ze.y) - pad, max(zs.x, ze.x) + pad,
            max(zs.y, ze.y) + pad)
    return classify(zs, ze, resolution=res, bbox=bbox, with_witness=False)


def replacement_path(zs: DirectedPoint, ze: DirectedPoint, turning: Optional[float] = None) -> CsPath:
    """Shortest CSC path with arcs < pi (and matching total turning if given)."""
    best = None
    for c in solve_all_variants(zs, ze):
        if not c.feasible or c.word not in ("LSL", "RSR", "LSR", "RSL"):
            continue
        if any(k != "S" and v >= math.pi for k, v in c.steps):
            continue
        if turning is not None and abs(c.path.turning - turning) > 1e-6:
            continue
        if best is None or c.length < best.length - 1e-12:
            best = c
    if best is None:
        raise FragmentInvalid("no CSC replacement with arcs < pi")
    return best.path


# ---------------------------------------------------------------- projection flows

def _reparam(points: np.ndarray, tangents: np.ndarray, s: np.ndarray, lift0: float,
             step_bound: float) -> SampledPath:
    speed = np.linalg.norm(tangents, axis=1)
    s_new = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(s))])
    hd = np.unwrap(np.arctan2(tangents[:, 1], tangents[:, 0]))
    hd += TWO_PI * round((lift0 - hd[0]) / TWO_PI)
    return SampledPath(s_new, points, hd, step_bound)


def _tangents(path: SampledPath) -> np.ndarray:
    return np.stack([np.cos(path.headings), np.sin(path.headings)], axis=1)


def radial_homotopy_step(path: SampledPath, center, p: float) -> SampledPath:
    """Scale each sample about ``center`` by (1 - p + p/r); headings from the map's Jacobian."""
    c = np.asarray(center, dtype=float)
    q = path.points - c
    r = np.linalg.norm(q, axis=1)
    if np.any(r <= EPS_GEOM):
        raise SingularProjection("sample at the projection center")
    g = 1.0 - p + p / r
    pts = c + g[:, None] * q
    t = _tangents(path)
    n = q / r[:, None]
    nt = np.sum(n * t, axis=1)
    # D[(1-p+p/r) q] t = g t - (p/r) n (n.t)
    tan = g[:, None] * t - (p / r * nt)[:, None] * n
    return _reparam(pts, tan, path.s, path.headings[0], path.step_bound)


@dataclass(frozen=True)
class AxisFrame:
    """Local frame: ``u`` along ``unit(theta)``, ``v`` along its left normal."""

    origin: Tuple[float, float]
    theta: float

    def to_local(self, pts):
        d = np.asarray(pts, dtype=float) - np.asarray(self.origin)
        e_u, e_v = unit(self.theta), left_normal(self.theta)
        return np.stack([d @ e_u, d @ e_v], axis=1)

    def to_world(self, uv):
        e_u, e_v = unit(self.theta), left_normal(self.theta)
        return np.asarray(self.origin) + uv[:, :1] * e_u + uv[:, 1:2] * e_v


def orthogonal_homotopy_step(path: SampledPath, frame: AxisFrame, p: float) -> SampledPath:
    """(u, v) -> ((1-p) u, v) in the given frame."""
    uv = frame.to_local(path.points)
    uv[:, 0] *= (1.0 - p)
    pts = frame.to_world(uv)
    t = frame.to_local(_tangents(path) + np.asarray(frame.origin))
    t[:, 0] *= (1.0 - p)
    tan = frame.to_world(t) - np.asarray(frame.origin)
    return _reparam(pts, tan, path.s, path.headings[0], path.step_bound)


class _TubeProjection:
    """Nearest-point projection onto a short cs path.

    Points are assigned to the piece whose normal slab contains them: arcs
    project radially from their centers, the segment orthogonally.
    """

    def __init__(self, beta: CsPath):
        if not beta.elements:
            raise FragmentInvalid("empty replacement")
        self.beta = beta
        self.ends = [(e.end_point, unit(e.end_heading)) for e in beta.elements]

    def piece_of(self, pts: np.ndarray) -> np.ndarray:
        idx = np.full(len(pts), len(self.beta.elements) - 1)
        assigned = np.zeros(len(pts), dtype=bool)
        for i, (ep, et) in enumerate(self.ends[:-1]):
            before = ((pts - ep) @ et) <= 0
            take = before & ~assigned
            idx[take] = i
            assigned |= take
        return idx

    def project(self, pts: np.ndarray, tans: np.ndarray):
        idx = self.piece_of(pts)
        P = np.empty_like(pts)
        DPt = np.empty_like(tans)
        for i, e in enumerate(self.beta.elements):
            m = idx == i
            if not m.any():
                continue
            q, t = pts[m], tans[m]
            if isinstance(e, Arc):
                v = q - e.center
                r = np.linalg.norm(v, axis=1)
                if np.any(r <= EPS_GEOM):
                    raise SingularProjection("sample at an arc center")
                n = v / r[:, None]
                P[m] = e.center + n
                DPt[m] = (t - np.sum(n * t, axis=1)[:, None] * n) / r[:, None]
            else:
                d = e.direction
                a = e.start_point
                P[m] = a + ((q - a) @ d)[:, None] * d
                DPt[m] = (t @ d)[:, None] * d
        return P, DPt


@dataclass
class DeformationTrace:
    frames: List[SampledPath]
    p: List[float]
    winding: List[Optional[int]] = field(default_factory=list)
    max_curvature: List[float] = field(default_factory=list)
    endpoint_residual: List[float] = field(default_factory=list)
    cs_frames: List[Optional[CsPath]] = field(default_factory=list)

    def __len__(self):
        return len(self.frames)

    def annotate(self, closure=None, start: Optional[DirectedPoint] = None,
                 end: Optional[DirectedPoint] = None):
        from .winding import winding_number
        self.winding, self.max_curvature, self.endpoint_residual = [], [], []
        start = start or self.frames[0].start
        end = end or self.frames[0].end
        for f in self.frames:
            self.winding.append(winding_number(f, closure, tol=1e-6) if closure is not None else None)
            self.max_curvature.append(validate_bounded_curvature(f).max_curvature if len(f) >= 3 else 0.0)
            r0 = f.start.distance_to(start) + abs(wrap_angle(f.start.theta - start.theta))
            r1 = f.end.distance_to(end) + abs(wrap_angle(f.end.theta - end.theta))
            self.endpoint_residual.append(max(r0, r1))
        return self

    def c1_steps(self) -> List[float]:
        """Max sample displacement plus heading change between consecutive frames."""
        out = []
        for a, b in zip(self.frames[:-1], self.frames[1:]):
            if len(a) != len(b):
                out.append(float("nan"))
                continue
            out.append(float(np.max(np.linalg.norm(a.points - b.points, axis=1)
                                    + np.abs(a.headings - b.headings))))
        return out

    def to_jsonl(self) -> str:
        lines = []
        for i, f in enumerate(self.frames):
            rec = {"frame": i, "p": self.p[i] if i < len(self.p) else None}
            if self.winding:
                rec["winding"] = self.winding[i]
                rec["maxCurvature"] = self.max_curvature[i]
                rec["endpointResidual"] = self.endpoint_residual[i]
            rec.update(f.to_json())
            lines.append(json.dumps(rec))
        return "\n".join(lines) + "\n"


def _blend_frames(frag: SampledPath, beta: CsPath, ps: Sequence[float]) -> List[SampledPath]:
    proj = _TubeProjection(beta)
    t = _tangents(frag)
    P, DPt = proj.project(frag.points, t)
    out = []
    for p in ps:
        pts = (1 - p) * frag.points + p * P
        tan = (1 - p) * t + p * DPt
        if p == 0:
            out.append(frag)
        else:
            f = _reparam(pts, tan, frag.s, frag.headings[0], frag.step_bound)
            if p == 1:
                # exact endpoints: projection of the ends is the identity on beta
                f.points[0], f.points[-1] = frag.points[0], frag.points[-1]
            out.append(f)
    return out


def _frames_ok(frames: Sequence[SampledPath], tol_frame: float) -> Optional[int]:
    for i, f in enumerate(frames):
        if len(f) >= 3 and validate_bounded_curvature(f, tol=tol_frame, speed_tol=1.0).violations:
            return i
    return None


def _is_own_replacement(frag: SampledPath, beta: CsPath) -> bool:
    P, DPt = _TubeProjection(beta).project(frag.points, _tangents(frag))
    return bool(np.max(np.linalg.norm(P - frag.points, axis=1)) < 1e-9)


def _deform(frag: SampledPath, ps: Sequence[float], tol_frame: float, depth: int, retry_cap: int):
    zs, ze = frag.start, frag.end
    beta = replacement_path(zs, ze, frag.turning)
    frames = _blend_frames(frag, beta, ps)
    bad = _frames_ok(frames, tol_frame)
    if bad is None:
        return frames, [beta]
    if depth >= retry_cap or len(frag) < 5:
        raise CurvatureViolation(f"frame {bad} exceeds curvature tolerance", frames[bad])
    mid = len(frag) // 2
    fa, ba = _deform(frag.slice(0, mid), ps, tol_frame, depth + 1, retry_cap)
    fb, bb = _deform(frag.slice(mid, len(frag) - 1), ps, tol_frame, depth + 1, retry_cap)
    return [SampledPath.concatenate([a, b]) for a, b in zip(fa, fb)], ba + bb


def deform_fragment_to_replacement(fragment_path: SampledPath, replacement: Optional[CsPath] = None,
                                   p_steps: int = 20, tol_frame: float = TOL_FRAME,
                                   retry_cap: int = 4) -> DeformationTrace:
    """Blend a fragment onto its replacement along nearest-point projections.

    Frame p is (1-p) * gamma + p * proj(gamma): radial about the arc centers
    on the two wedges, orthogonal on the segment band. Frames that exceed the
    curvature tolerance trigger subdivision (each half gets its own
    replacement) up to ``retry_cap`` levels.
    """
    if replacement is None:
        replacement = replacement_path(fragment_path.start, fragment_path.end, fragment_path.turning)
    if _is_own_replacement(fragment_path, replacement):
        tr = DeformationTrace([fragment_path], [0.0], cs_frames=[replacement])
        return tr.annotate()
    ps = list(np.linspace(0.0, 1.0, max(2, p_steps)))
    frames = _blend_frames(fragment_path, replacement, ps)
    bad = _frames_ok(frames, tol_frame)
    betas = [replacement]
    if bad is not None:
        frames, betas = _deform(fragment_path, ps, tol_frame, 0, retry_cap)
    tr = DeformationTrace(frames, ps)
    tr.cs_frames = [None] * (len(frames) - 1) + [_chain(fragment_path.start, betas)]
    return tr.annotate()


def _chain(start: DirectedPoint, parts: Sequence[CsPath]) -> CsPath:
    steps = [s for b in parts for s in b.steps]
    return CsPath.from_steps(start, steps)


def normalize_to_cs(path: SampledPath, target_len: float = 0.9, p_steps: int = 20,
                    tol_frame: float = TOL_FRAME, delta_max: float = DELTA_MAX,
                    retry_cap: int = 4, closure=None) -> Tuple[CsPath, DeformationTrace]:
    """Deform every fragment onto its replacement simultaneously."""
    rep = validate_bounded_curvature(path, tol=tol_frame, speed_tol=max(1e-4, path.step_bound ** 2))
    if rep.violations:
        raise CurvatureViolation("input exceeds the curvature bound")
    fr = fragment(path, target_len, delta_max)
    ps = list(np.linspace(0.0, 1.0, max(2, p_steps)))
    per_frag, betas = [], []
    for i, j in zip(fr.indices[:-1], fr.indices[1:]):
        frag = path.slice(i, j)
        frames, bs = _deform(frag, ps, tol_frame, 0, retry_cap)
        per_frag.append(frames)
        betas.extend(bs)
    frames = [SampledPath.concatenate([pf[k] for pf in per_frag]) for k in range(len(ps))]
    result = _chain(path.start, betas).canonical()
    if closure is None:
        from .winding import closure_path
        closure = closure_path(path.start, path.end)
    tr = DeformationTrace(frames, ps)
    tr.cs_frames = [None] * (len(frames) - 1) + [result]
    tr.annotate(closure, path.start, path.end)
    return result, tr


# ---------------------------------------------------------------- complexity reduction

def _window_condition(x: DirectedPoint, y: DirectedPoint) -> str:
    return classify(x, y, resolution=0.02, with_witness=False).condition


def reduce_complexity(path: CsPath, loop_cap: int = 2) -> CsPath:
    """Replace sub-paths by shorter, simpler ones with the same total turning.

    A window is replaced only when its endpoint condition is A, B or C, so
    the replacement lies in the same bounded-homotopy class.
    """
    cur = path.canonical()
    rounds = 0
    while True:
        rounds += 1
        changed = False
        n = len(cur.elements)
        for size in range(n, 1, -1):
            for i in range(0, n - size + 1):
                els = cur.elements[i:i + size]
                sub = CsPath(_pose_before(cur, i), els)
                a, b = sub.start, sub.end
                cands = [c for c in candidates_with_turning(a, b, sub.turning, loop_cap)
                         if c.path.canonical().complexity < size and c.length <= sub.length + 1e-12]
                if not cands:
                    continue
                if _window_condition(a, b) == "D":
                    continue
                best = min(cands, key=lambda c: (c.length, c.path.complexity)).path
                steps = cur.steps[:i] + best.steps + cur.steps[i + size:]
                cur = CsPath.from_steps(cur.start, steps).canonical()
                changed = True
                break
            if changed:
                break
        if not changed:
            return cur


def _pose_before(path: CsPath, i: int) -> DirectedPoint:
    if i == 0:
        return path.start
    e = path.elements[i - 1]
    return DirectedPoint.from_point(e.end_point, e.end_heading)


# ---------------------------------------------------------------- cs moves

def type_i_operation(path: CsPath, s: float, first: str = "L") -> CsPath:
    """Insert a figure-8 (two full opposite loops) at arc length ``s``."""
    if s < EPS_GEOM or s > path.length - EPS_GEOM:
        raise InvalidAxis("axis point must be interior")
    second = "R" if first == "L" else "L"
    i, t = path.locate(s)
    steps = path.steps
    kind, v = steps[i]
    if t < EPS_GEOM and i > 0:
        split = [(first, TWO_PI), (second, TWO_PI), (kind, v)]
    else:
        split = [(kind, t), (first, TWO_PI), (second, TWO_PI), (kind, v - t)]
    return CsPath.from_steps(path.start, steps[:i] + split + steps[i + 1:])


def collapse_figure_eight(path: CsPath, tol: float = 1e-9) -> CsPath:
    """Remove the first adjacent pair of full opposite loops (inverse of type I)."""
    st = path.steps
    for i in range(len(st) - 1):
        (k1, v1), (k2, v2) = st[i], st[i + 1]
        if {k1, k2} == {"L", "R"} and abs(v1 - TWO_PI) <= tol and abs(v2 - TWO_PI) <= tol:
            rest = st[:i] + st[i + 2:]
            if 0 < i < len(st) - 2 and st[i - 1][0] == st[i + 2][0]:
                rest = st[:i - 1] + [(st[i - 1][0], st[i - 1][1] + st[i + 2][1])] + st[i + 3:]
            return CsPath.from_steps(path.start, rest)
    raise ValueError("no figure-8 found")


def type_ii_operation(path: CsPath, segment_index: int, depth: float,
                      side: Optional[int] = None) -> CsPath:
    """Push a segment sideways by ``depth`` at its midpoint with a unit disk.

    The bump is built from two CSC pieces (P to apex, apex to Q). By default
    the push goes to the side the preceding arc turns toward.
    """
    e = path.elements[segment_index]
    if not isinstance(e, Line):
        raise PushInfeasible("element is not a segment")
    if depth == 0:
        return path
    if side is None:
        prev = path.elements[segment_index - 1] if segment_index > 0 else None
        side = prev.orientation if isinstance(prev, Arc) else LEFT
    P = DirectedPoint.from_point(e.start_point, e.theta)
    Q = DirectedPoint.from_point(e.end_point, e.theta)
    apex = e.point_at(e.length / 2) + side * abs(depth) * left_normal(e.theta)
    A = DirectedPoint.from_point(apex, e.theta)
    w1, w2 = ("LSR", "RSL") if side == LEFT else ("RSL", "LSR")
    c1, c2 = _csc(P, A, w1), _csc(A, Q, w2)
    if not (c1.feasible and c2.feasible):
        raise PushInfeasible(f"depth {depth} does not fit on a segment of length {e.length:.3g}")
    if abs(c1.path.turning) > 1e-9 or abs(c2.path.turning) > 1e-9:
        raise PushInfeasible("bump would add a loop")
    st = path.steps
    new = st[:segment_index] + list(c1.path.steps) + list(c2.path.steps) + st[segment_index + 1:]
    return CsPath.from_steps(path.start, new).canonical()


def push_witness(path: CsPath, bound: float, depth0: float = 1.0, max_iter: int = 40):
    """Iterated segment pushes until the length exceeds ``bound``.

    Returns the list of pushed paths (last one longer than ``bound``).
    """
    idx = [i for i, e in enumerate(path.elements) if isinstance(e, Line)]
    if not idx:
        raise PushInfeasible("path has no segment to push")
    seg = max(idx, key=lambda i: path.elements[i].length)
    out = []
    depth = depth0
    for _ in range(max_iter):
        try:
            q = type_ii_operation(path, seg, depth)
        except PushInfeasible:
            q = None
        if q is not None:
            out.append(q)
            if q.length > bound:
                return out
        depth *= 2.0
    raise PushInfeasible(f"could not exceed length {bound}")


# ---------------------------------------------------------------- skew deformation

def _back_pose(y: DirectedPoint, kind: str, sweep: float) -> DirectedPoint:
    """Pose z such that an arc ``kind`` of ``sweep`` from z ends at y."""
    o = LEFT if kind == "L" else RIGHT
    c = adjacent_center(y, o)
    ang = math.atan2(y.y - c[1], y.x - c[0]) - o * sweep
    p = c + np.array([math.cos(ang), math.sin(ang)])
    return DirectedPoint(p[0], p[1], y.theta - o * sweep)


def skew_homotopy(path: CsPath, step: float = 0.05, unfold_steps: int = 40,
                  sample_step: float = 0.02) -> DeformationTrace:
    """Deform an RSL path into the LSR path with the same endpoints.

    Figure-8 at the segment midpoint, loops carried to the two ends (the ccw
    loop back to x, the cw loop forward to y), then both loops unwound while
    the middle RSL is re-solved.
    """
    st = path.canonical().steps
    if [k for k, _ in st] != ["R", "S", "L"]:
        raise SkewInfeasible("input must be a non-degenerate RSL path")
    (_, b1), (_, ell), (_, b2) = st
    x, y = path.start, path.end
    target = _csc(x, y, "LSR")
    if not target.feasible or abs(target.path.turning - path.turning) > 1e-9:
        raise SkewInfeasible("LSR target is not in the same winding class")
    a_t, b_t = target.steps[0][1], target.steps[2][1]

    seg = path.elements[[e.kind for e in path.elements].index("line")]
    cly = adjacent_center(y, LEFT)
    crx = adjacent_center(x, RIGHT)
    frames: List[CsPath] = [path]

    def check(t1, t2):
        l_center = seg.point_at(t1) + left_normal(seg.theta)
        r_center = seg.point_at(t2) - left_normal(seg.theta)
        if (np.hypot(*(l_center - cly)) < 2 - EPS_GEOM or np.hypot(*(r_center - crx)) < 2 - EPS_GEOM):
            raise SkewInfeasible("loop collides with the opposite endpoint circle")

    mid = ell / 2
    check(mid, mid)
    frames.append(CsPath.from_steps(x, [("R", b1), ("S", mid), ("L", TWO_PI), ("R", TWO_PI),
                                        ("S", ell - mid), ("L", b2)]))
    n = max(1, int(math.ceil(mid / step)))
    for k in range(1, n + 1):
        d = mid * k / n
        t1, t2 = mid - d, mid + d
        check(t1, t2)
        frames.append(CsPath.from_steps(x, [("R", b1), ("S", t1), ("L", TWO_PI), ("S", t2 - t1),
                                            ("R", TWO_PI), ("S", ell - t2), ("L", b2)]))
    # along the arcs to the endpoints
    n = max(1, int(math.ceil(max(b1, b2) / step)))
    for k in range(1, n + 1):
        u1, u2 = b1 * k / n, b2 * k / n
        frames.append(CsPath.from_steps(x, [("R", b1 - u1), ("L", TWO_PI), ("R", u1), ("S", ell),
                                            ("L", u2), ("R", TWO_PI), ("L", b2 - u2)]))
    # unwind: L(alpha) + RSL(x_alpha, y_delta) + R(delta)
    for k in range(1, unfold_steps + 1):
        s = k / unfold_steps
        alpha = TWO_PI + s * (a_t - TWO_PI)
        delta = TWO_PI + s * (b_t - TWO_PI)
        xa = CsPath.from_steps(x, [("L", alpha)]).end
        yd = _back_pose(y, "R", delta)
        if k == unfold_steps:
            mid_path = CsPath.from_steps(xa, [("S", target.steps[1][1])])
        else:
            c = _csc(xa, yd, "RSL")
            if not c.feasible:
                raise SkewInfeasible("middle RSL became infeasible while unwinding")
            mid_path = c.path
        frames.append(CsPath.from_steps(x, [("L", alpha)] + mid_path.steps + [("R", delta)]))

    from .winding import closure_path
    lam = closure_path(x, y)
    tr = DeformationTrace([sample_path(f, sample_step) for f in frames],
                          list(np.linspace(0, 1, len(frames))), cs_frames=frames)
    tr.annotate(lam, x, y)
    w0 = tr.winding[0]
    if any(w != w0 for w in tr.winding) or max(tr.endpoint_residual) > 1e-6:
        raise SkewInfeasible("winding or endpoints drifted during the deformation")
    return tr
