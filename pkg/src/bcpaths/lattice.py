"""Brute-force shortest paths on a motion-primitive lattice.

An independent check on the analytic solver. Every expansion is one of
three primitives of equal length h = 2*pi/N (left arc, straight, right arc
of unit radius), so headings stay exact multiples of h. States within the
goal radius are closed with an exact arc-segment-arc tail; each reported
path is therefore a genuine bounded-curvature path and its length can never
be below the true optimum.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .cspath import CsPath, sample_path
from .geometry import TWO_PI, DirectedPoint, wrap_angle

# Gap bound between the lattice optimum and the true optimum, as a multiple
# of (position step + goal radius). The worst gap seen on 50 random pairs at
# step 0.1 was 0.8 against a bound of 1.65.
SLACK_C = 1.5


class OracleUnreachable(RuntimeError):
    pass


@dataclass(frozen=True)
class LatticeConfig:
    position_step: float = 0.1
    goal_tolerance: float = 1.0  # radius in which exact tails are attempted
    heuristic: bool = False
    margin: float = 4.0  # bounds = endpoint box padded by this
    max_nodes: int = 5_000_000
    turning_bins: bool = False

    def __post_init__(self):
        if not (self.position_step > 0 and self.goal_tolerance > 0):
            raise ValueError("steps must be positive")

    @property
    def n_headings(self) -> int:
        return max(8, int(round(TWO_PI / self.position_step)))

    @property
    def primitive_sweep(self) -> float:
        return TWO_PI / self.n_headings

    @property
    def slack(self) -> float:
        return SLACK_C * (self.position_step + self.goal_tolerance)


@dataclass
class OracleResult:
    length: float
    path: CsPath
    polyline: np.ndarray
    nodes: int
    runtime: float
    turning: float  # total turning of the returned path (audit)
    primitive_turning: float  # turning from primitive bookkeeping + tail

    def to_json(self) -> dict:
        from .cspath import path_to_json
        return {"length": self.length, "nodes": self.nodes, "runtime": self.runtime,
                "turning": self.turning, "path": path_to_json(self.path),
                "polyline": self.polyline.tolist()}


def _disp(theta0: float, a: float) -> np.ndarray:
    """Displacement along a unit arc of signed sweep ``a`` starting at heading theta0."""
    if a == 0:
        return np.zeros(2)
    s = 1.0 if a > 0 else -1.0
    return s * np.array([math.sin(theta0 + a) - math.sin(theta0),
                         math.cos(theta0) - math.cos(theta0 + a)])


_FRACTIONS = np.linspace(0.0, 1.0, 33)


def exact_tail(p: np.ndarray, theta: float, y: DirectedPoint, delta: float):
    """Arc a, segment l >= 0, arc b = delta - a ending exactly at y.

    |a|, |b| <= pi/2. Returns ``(length, a, l, b)`` of the shortest root or None.
    """
    lo = max(-math.pi / 2, delta - math.pi / 2)
    hi = min(math.pi / 2, delta + math.pi / 2)
    if lo > hi:
        return None
    yx, yy = y.x, y.y
    px, py = float(p[0]), float(p[1])
    st, ct = math.sin(theta), math.cos(theta)
    sd, cd = math.sin(theta + delta), math.cos(theta + delta)

    def parts(a):
        # residual r = (y - disp(theta+a, delta-a)) - (p + disp(theta, a)); sign(0) terms vanish
        sa, ca = np.sin(theta + a), np.cos(theta + a)
        sgn_a = np.sign(a)
        sgn_b = np.sign(delta - a)
        rx = yx - sgn_b * (sd - sa) - px - sgn_a * (sa - st)
        ry = yy - sgn_b * (ca - cd) - py - sgn_a * (ct - ca)
        return rx, ry, sa, ca

    def f(a):
        rx, ry, sa, ca = parts(a)
        return ca * ry - sa * rx

    def f_scalar(a):
        # same residual as f, without numpy overhead on scalars
        sa, ca = math.sin(theta + a), math.cos(theta + a)
        sgn_a = (a > 0) - (a < 0)
        sgn_b = (delta - a > 0) - (delta - a < 0)
        rx = yx - sgn_b * (sd - sa) - px - sgn_a * (sa - st)
        ry = yy - sgn_b * (ca - cd) - py - sgn_a * (ct - ca)
        return ca * ry - sa * rx

    grid = lo + (hi - lo) * _FRACTIONS
    vals = f(grid)
    roots = list(grid[vals == 0])
    ch = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    for i in ch:
        roots.append(brentq(f_scalar, grid[i], grid[i + 1], xtol=1e-13))
    best = None
    for a in roots:
        rx, ry, sa, ca = parts(float(a))
        ell = float(ca * rx + sa * ry)
        if ell < -1e-9:
            continue
        L = abs(a) + max(ell, 0.0) + abs(delta - a)
        if best is None or L < best[0]:
            best = (L, float(a), max(ell, 0.0), float(delta - a))
    return best


def _arc_step(kind: str, v: float):
    if kind == "S":
        return ("S", v)
    return ("L", v) if v > 0 else ("R", -v)


def _search(x: DirectedPoint, y: DirectedPoint, cfg: LatticeConfig, target_turning: Optional[float]):
    t0 = time.perf_counter()
    N = cfg.n_headings
    h = cfg.primitive_sweep
    cell = cfg.position_step
    ths = x.theta + h * np.arange(N)
    cos_t, sin_t = np.cos(ths), np.sin(ths)
    # displacement tables indexed by heading bin (mod N)
    nx, ny = -sin_t, cos_t
    dl = np.stack([nx - np.roll(nx, -1), ny - np.roll(ny, -1)], axis=1)
    dr = -np.stack([nx - np.roll(nx, 1), ny - np.roll(ny, 1)], axis=1)
    ds = h * np.stack([cos_t, sin_t], axis=1)
    moves = ((1, dl), (0, ds), (-1, dr))

    xmin = min(x.x, y.x) - cfg.margin
    xmax = max(x.x, y.x) + cfg.margin
    ymin = min(x.y, y.y) - cfg.margin
    ymax = max(x.y, y.y) + cfg.margin
    yx, yy = y.x, y.y
    R2 = cfg.goal_tolerance ** 2
    in_class = target_turning is not None
    if in_class:
        k_min = math.floor((target_turning - 2 * math.pi - TWO_PI) / h)
        k_max = math.ceil((target_turning + 2 * math.pi + TWO_PI) / h)

    def heur(px, py, k):
        if not cfg.heuristic:
            return 0.0
        # unit curvature: length is at least the distance and the net turning still needed
        d = math.hypot(px - yx, py - yy)
        if in_class:
            return max(d, abs(target_turning - k * h))
        return max(d, abs(wrap_angle(y.theta - x.theta - k * h)))

    # state: (f, g, tie, px, py, k) with k the signed turn count
    start = (heur(x.x, x.y, 0), 0.0, 0, x.x, x.y, 0)
    heap = [start]
    parent = {0: (None, 0)}  # node id -> (parent id, move)
    seen = set()
    tried = set()
    fine = cell / 4
    best = None
    nodes = 0
    entry_counter = 1
    while heap:
        f, g, eid, px, py, k = heapq.heappop(heap)
        if best is not None and f >= best[0] - 1e-12:
            break
        # tails are tried before deduplication so a better-placed state in an
        # already visited cell still gets its chance at the goal
        d2 = (px - yx) ** 2 + (py - yy) ** 2
        tkey = (int(math.floor(px / fine)), int(math.floor(py / fine)), k)
        if d2 <= R2 and (best is None or g + math.sqrt(d2) < best[0]) and tkey not in tried:
            tried.add(tkey)
            theta = x.theta + k * h
            if in_class:
                delta = target_turning - k * h
            else:
                delta = wrap_angle(y.theta - theta)
            tail = exact_tail((px, py), theta, y, delta) if abs(delta) <= math.pi else None
            if tail is not None and (best is None or g + tail[0] < best[0]):
                best = (g + tail[0], eid, tail, k)
        key = (int(math.floor(px / cell)), int(math.floor(py / cell)), k if in_class else k % N)
        if key in seen:
            continue
        seen.add(key)
        nodes += 1
        if nodes > cfg.max_nodes:
            break
        kb = k % N
        for dk, table in moves:
            k2 = k + dk
            if in_class and not (k_min <= k2 <= k_max):
                continue
            qx = px + table[kb, 0]
            qy = py + table[kb, 1]
            if not (xmin <= qx <= xmax and ymin <= qy <= ymax):
                continue
            g2 = g + h
            nid = entry_counter
            entry_counter += 1
            parent[nid] = (eid, dk)
            heapq.heappush(heap, (g2 + heur(qx, qy, k2), g2, nid, qx, qy, k2))
    if best is None:
        raise OracleUnreachable("goal not reached at this resolution")
    total, eid, tail, k = best
    moves_list = []
    while eid:
        pe, dk = parent[eid]
        moves_list.append(dk)
        eid = pe
    moves_list.reverse()
    steps = []
    for dk in moves_list:
        kind = "S" if dk == 0 else ("L" if dk > 0 else "R")
        if steps and steps[-1][0] == kind:
            steps[-1][1] += h
        else:
            steps.append([kind, h])
    _, a, ell, b = tail
    steps += [list(_arc_step("A", a)), ["S", ell], list(_arc_step("A", b))]
    path = CsPath.from_steps(x, [tuple(s) for s in steps if s[1] > 0], drop_tol=0.0).canonical()
    poly = sample_path(path, cfg.position_step / 2).points if path.elements else x.point[None, :]
    prim_turning = k * h + a + b
    return OracleResult(path.length, path, poly, nodes, time.perf_counter() - t0, path.turning,
                        prim_turning)


def shortest_path(x: DirectedPoint, y: DirectedPoint, cfg: LatticeConfig = LatticeConfig()) -> OracleResult:
    return _search(x, y, cfg, None)


def shortest_path_in_class(x: DirectedPoint, y: DirectedPoint, closure, n: int,
                           cfg: LatticeConfig = LatticeConfig()) -> OracleResult:
    """Shortest lattice path whose winding number with ``closure`` is ``n``."""
    target = TWO_PI * n - closure.turning
    return _search(x, y, cfg, target)
