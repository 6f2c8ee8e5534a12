"""Planar primitives: directed points, unit circles, arcs and segments.

Everything downstream works with curvature bound 1; use
:func:`scale_to_unit_curvature` to bring other bounds into that frame.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

EPS_GEOM = 1e-9
TWO_PI = 2.0 * math.pi

LEFT = 1
RIGHT = -1


class GeometryError(ValueError):
    """Raised for invalid geometric parameters."""


def wrap_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


def mod2pi(a: float) -> float:
    """Map an angle to [0, 2pi)."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a -= TWO_PI
    return a


def unit(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


def left_normal(theta: float) -> np.ndarray:
    return np.array([-math.sin(theta), math.cos(theta)])


def cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


@dataclass(frozen=True)
class DirectedPoint:
    """A point of the tangent bundle: position plus unit heading."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise GeometryError("directed point must be finite")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    @classmethod
    def from_point(cls, point, theta: float) -> "DirectedPoint":
        return cls(float(point[0]), float(point[1]), theta)

    @property
    def point(self) -> np.ndarray:
        return np.array([self.x, self.y])

    @property
    def direction(self) -> np.ndarray:
        return unit(self.theta)

    def distance_to(self, other: "DirectedPoint") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def is_close(self, other: "DirectedPoint", tol: float = 1e-9) -> bool:
        return (self.distance_to(other) <= tol
                and abs(wrap_angle(self.theta - other.theta)) <= tol)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.theta)


@dataclass(frozen=True)
class Circle:
    """An oriented circle; orientation is LEFT (+1, ccw) or RIGHT (-1, cw)."""

    cx: float
    cy: float
    radius: float = 1.0
    orientation: int = LEFT

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError("circle radius must be positive")
        if self.orientation not in (LEFT, RIGHT):
            raise GeometryError("orientation must be LEFT or RIGHT")

    @property
    def center(self) -> np.ndarray:
        return np.array([self.cx, self.cy])

    def point_at(self, phi: float) -> np.ndarray:
        return np.array([self.cx + self.radius * math.cos(phi),
                         self.cy + self.radius * math.sin(phi)])

    def heading_at(self, phi: float) -> float:
        """Heading of motion along the circle at polar angle ``phi``."""
        return wrap_angle(phi + self.orientation * math.pi / 2)

    def polar_angle(self, p) -> float:
        return math.atan2(p[1] - self.cy, p[0] - self.cx)


def adjacent_circles(x: DirectedPoint) -> Tuple[Circle, Circle]:
    """Unit circles tangent to ``x`` on its left (ccw) and right (cw)."""
    n = left_normal(x.theta)
    left = Circle(x.x + n[0], x.y + n[1], 1.0, LEFT)
    right = Circle(x.x - n[0], x.y - n[1], 1.0, RIGHT)
    return left, right


def adjacent_center(x: DirectedPoint, orientation: int) -> np.ndarray:
    return x.point + orientation * left_normal(x.theta)


def scale_to_unit_curvature(x: DirectedPoint, y: DirectedPoint, kappa: float):
    """Rescale positions so the curvature bound ``kappa`` becomes 1.

    Returns ``(x', y', factor)``; lengths computed in the scaled frame are
    divided by ``factor`` to recover lengths at the original bound.
    """
    if not (kappa > 0 and math.isfinite(kappa)):
        raise GeometryError(f"kappa must be positive, got {kappa}")
    xs = DirectedPoint(x.x * kappa, x.y * kappa, x.theta)
    ys = DirectedPoint(y.x * kappa, y.y * kappa, y.theta)
    return xs, ys, float(kappa)


def unscale_point(x: DirectedPoint, factor: float) -> DirectedPoint:
    return DirectedPoint(x.x / factor, x.y / factor, x.theta)


def unscale_length(length: float, factor: float) -> float:
    return length / factor


@dataclass(frozen=True)
class RigidMotion:
    """Rotation by ``angle`` about the origin followed by translation."""

    angle: float = 0.0
    tx: float = 0.0
    ty: float = 0.0
    reflect: bool = False  # reflect across the x-axis before rotating

    def apply_point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if self.reflect:
            p = p * np.array([1.0, -1.0])
        c, s = math.cos(self.angle), math.sin(self.angle)
        rot = np.array([[c, -s], [s, c]])
        return p @ rot.T + np.array([self.tx, self.ty])

    def apply_heading(self, theta):
        if self.reflect:
            theta = -np.asarray(theta)
        return theta + self.angle

    def apply(self, x: DirectedPoint) -> DirectedPoint:
        p = self.apply_point(x.point)
        return DirectedPoint(p[0], p[1], float(self.apply_heading(x.theta)))

    def apply_circle(self, c: Circle) -> Circle:
        p = self.apply_point(c.center)
        orient = -c.orientation if self.reflect else c.orientation
        return Circle(p[0], p[1], c.radius, orient)


REFLECT_X = RigidMotion(reflect=True)


@dataclass(frozen=True)
class Arc:
    """Arc of a unit circle; ``sweep`` is signed (positive = ccw)."""

    cx: float
    cy: float
    start_angle: float
    sweep: float

    def __post_init__(self):
        if not abs(self.sweep) > 0:
            raise GeometryError("arc must have nonzero sweep")

    kind = "arc"

    @property
    def orientation(self) -> int:
        return LEFT if self.sweep > 0 else RIGHT

    @property
    def circle(self) -> Circle:
        return Circle(self.cx, self.cy, 1.0, self.orientation)

    @property
    def center(self) -> np.ndarray:
        return np.array([self.cx, self.cy])

    @property
    def length(self) -> float:
        return abs(self.sweep)

    @property
    def turning(self) -> float:
        return self.sweep

    def point_at(self, s):
        """Position at arc length ``s`` (scalar or array) from the start."""
        phi = self.start_angle + np.sign(self.sweep) * np.asarray(s, dtype=float)
        return np.stack([self.cx + np.cos(phi), self.cy + np.sin(phi)], axis=-1)

    def heading_at(self, s):
        """Unwrapped heading relative to the start heading's lift."""
        sgn = 1.0 if self.sweep > 0 else -1.0
        return self.start_angle + sgn * math.pi / 2 + sgn * np.asarray(s, dtype=float)

    @property
    def start_point(self) -> np.ndarray:
        return self.point_at(0.0)

    @property
    def end_point(self) -> np.ndarray:
        return self.point_at(self.length)

    @property
    def start_heading(self) -> float:
        return wrap_angle(float(self.heading_at(0.0)))

    @property
    def end_heading(self) -> float:
        return wrap_angle(float(self.heading_at(self.length)))


@dataclass(frozen=True)
class Line:
    """Straight segment from ``start`` to ``end``."""

    x0: float
    y0: float
    x1: float
    y1: float
    # exact heading when known; recovering it from very short segments loses digits
    heading: Optional[float] = None

    def __post_init__(self):
        if not math.hypot(self.x1 - self.x0, self.y1 - self.y0) > 0:
            raise GeometryError("segment must have positive length")

    kind = "line"
    orientation = 0
    turning = 0.0

    @property
    def length(self) -> float:
        return math.hypot(self.x1 - self.x0, self.y1 - self.y0)

    @property
    def direction(self) -> np.ndarray:
        if self.heading is not None:
            return unit(self.heading)
        return np.array([self.x1 - self.x0, self.y1 - self.y0]) / self.length

    @property
    def theta(self) -> float:
        if self.heading is not None:
            return self.heading
        return math.atan2(self.y1 - self.y0, self.x1 - self.x0)

    def point_at(self, s):
        s = np.asarray(s, dtype=float)
        return np.array([self.x0, self.y0]) + s[..., None] * self.direction

    def heading_at(self, s):
        return np.full(np.shape(s), self.theta)

    @property
    def start_point(self) -> np.ndarray:
        return np.array([self.x0, self.y0])

    @property
    def end_point(self) -> np.ndarray:
        return np.array([self.x1, self.y1])

    @property
    def start_heading(self) -> float:
        return self.theta

    @property
    def end_heading(self) -> float:
        return self.theta


Element = Union[Arc, Line]


def arc_from(x: DirectedPoint, orientation: int, sweep: float) -> Arc:
    """Arc leaving ``x`` on its adjacent circle; ``sweep`` is a magnitude."""
    c = adjacent_center(x, orientation)
    start = math.atan2(x.y - c[1], x.x - c[0])
    return Arc(float(c[0]), float(c[1]), start, orientation * abs(sweep))


def line_from(x: DirectedPoint, length: float) -> Line:
    end = x.point + length * x.direction
    return Line(x.x, x.y, float(end[0]), float(end[1]), x.theta)


def element_end(x: DirectedPoint, element: Element) -> DirectedPoint:
    return DirectedPoint.from_point(element.end_point, element.end_heading)


def transform_element(g: RigidMotion, e: Element) -> Element:
    if isinstance(e, Line):
        a = g.apply_point(e.start_point)
        b = g.apply_point(e.end_point)
        h = None if e.heading is None else wrap_angle(float(g.apply_heading(e.heading)))
        return Line(a[0], a[1], b[0], b[1], h)
    c = g.apply_point(e.center)
    p = g.apply_point(e.start_point)
    start = math.atan2(p[1] - c[1], p[0] - c[0])
    sweep = -e.sweep if g.reflect else e.sweep
    return Arc(c[0], c[1], start, sweep)
