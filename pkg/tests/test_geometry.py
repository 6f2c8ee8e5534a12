import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcpaths.geometry import (LEFT, RIGHT, DirectedPoint, GeometryError, RigidMotion,
                              adjacent_center, adjacent_circles, mod2pi, scale_to_unit_curvature,
                              unscale_point, wrap_angle)

from conftest import directed_points, rigid_motions
from oracles import adjacent_centers


def test_axis_aligned_centers():
    l, r = adjacent_circles(DirectedPoint(0, 0, 0))
    assert np.allclose(l.center, [0, 1]) and np.allclose(r.center, [0, -1])


def test_rotated_centers_match_complex_rotation():
    ref_l, ref_r = adjacent_centers(1, 1, math.pi / 2)
    assert np.allclose(ref_l, [0, 1]) and np.allclose(ref_r, [2, 1])
    x = DirectedPoint(1, 1, math.pi / 2)
    assert np.allclose(adjacent_center(x, LEFT), ref_l, atol=1e-12)
    assert np.allclose(adjacent_center(x, RIGHT), ref_r, atol=1e-12)


@given(directed_points)
def test_centers_two_apart(x):
    l, r = adjacent_circles(x)
    assert math.isclose(np.hypot(*(l.center - r.center)), 2.0, abs_tol=1e-12)
    ref_l, ref_r = adjacent_centers(x.x, x.y, x.theta)
    assert np.allclose(l.center, ref_l, atol=1e-12) and np.allclose(r.center, ref_r, atol=1e-12)


@given(st.floats(-50, 50))
def test_wrap_range(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    assert 0 <= mod2pi(a) < 2 * math.pi


def test_heading_normalized_on_construction():
    assert DirectedPoint(0, 0, 3 * math.pi).theta == pytest.approx(math.pi)
    with pytest.raises(GeometryError):
        DirectedPoint(0, float("nan"), 0)


def test_scaling():
    x, y = DirectedPoint(3, 0, 0), DirectedPoint(1, 2, 1)
    xs, ys, f = scale_to_unit_curvature(x, y, 1.0)
    assert xs == x and ys == y
    xs, _, f = scale_to_unit_curvature(x, y, 2.0)
    assert (xs.x, xs.y) == (6, 0)
    back = unscale_point(xs, f)
    assert back.is_close(x, 1e-12)
    with pytest.raises(GeometryError):
        scale_to_unit_curvature(x, y, 0.0)


@given(directed_points, rigid_motions)
def test_rigid_motion_preserves_adjacency(x, m):
    g = RigidMotion(*m)
    gx = g.apply(x)
    for o in (LEFT, RIGHT):
        assert np.allclose(g.apply_point(adjacent_center(x, o)), adjacent_center(gx, o), atol=1e-9)


@given(directed_points)
def test_reflection_swaps_sides(x):
    g = RigidMotion(reflect=True)
    gx = g.apply(x)
    assert np.allclose(g.apply_point(adjacent_center(x, LEFT)), adjacent_center(gx, RIGHT), atol=1e-9)
