import math

import numpy as np
import pytest
from hypothesis import given

from bcpaths.corpus import random_pairs
from bcpaths.cspath import CsPath
from bcpaths.geometry import DirectedPoint, RigidMotion
from bcpaths.proximity import (center_distances, classify, detect_omega, detect_single_arc,
                               detect_two_arc, raw_condition)

from conftest import directed_points
from oracles import adjacent_centers, free_component

O = DirectedPoint(0, 0, 0)


def ref_distances(x, y):
    lx, rx = adjacent_centers(*x.as_tuple())
    ly, ry = adjacent_centers(*y.as_tuple())
    return math.dist(lx, ly), math.dist(rx, ry)


def test_far_pair_is_a():
    rep = classify(O, DirectedPoint(4, 0, 0))
    assert (rep.d_ll, rep.d_rr) == pytest.approx((4, 4))
    assert rep.raw_condition == "i" and rep.condition == "A"
    assert rep.boundary


def test_shared_left_circle_is_b():
    rep = classify(O, DirectedPoint(0, 2, math.pi))
    assert rep.d_ll == pytest.approx(0, abs=1e-12) and rep.d_rr == pytest.approx(4)
    assert rep.raw_condition == "ii" and rep.condition == "B"


def test_close_pair_has_omega():
    rep = classify(O, DirectedPoint(1, 0, 0))
    assert (rep.d_ll, rep.d_rr) == pytest.approx((1, 1))
    assert rep.condition == "D" and rep.d_subcase == "OmegaRegion"
    assert rep.omega.contains([(0.5, 0.0)])[0]
    # independent flood fill from the same seed finds a bounded component of similar size
    centers = [tuple(c) for c in rep.centers.values()]
    cells, touches = free_component(centers, (0.5, 0.0), 0.01)
    assert not touches
    assert abs(cells * 1e-4 - rep.omega.area) < 0.1 * rep.omega.area


def test_omega_cells_outside_disks():
    om = detect_omega(O, DirectedPoint(1, 0, 0), 0.01)
    pts = om.cell_centers()
    for c in om.centers:
        assert np.all(np.linalg.norm(pts - np.asarray(c), axis=1) >= 1.0)


def test_single_arc():
    y = DirectedPoint(1, 1, math.pi / 2)
    sa = detect_single_arc(O, y)
    assert sa is not None and sa.center == pytest.approx((0, 1))
    assert sa.sweep == pytest.approx(math.pi / 2)
    # the arc is gamma(t) = (sin t, 1 - cos t)
    assert sa.path(O).end.is_close(DirectedPoint(math.sin(math.pi / 2), 1 - math.cos(math.pi / 2),
                                                 math.pi / 2), 1e-12)
    rep = classify(O, y)
    assert rep.condition == "D" and rep.d_subcase == "SingleArc" and rep.omega is None


def test_single_arc_excludes_half_turn_and_off_circle():
    assert detect_single_arc(O, DirectedPoint(0, 2, math.pi)) is None
    assert detect_single_arc(O, DirectedPoint(1, 0, 0)) is None


def test_two_arc_recovered():
    y = CsPath.from_steps(O, [("R", math.pi / 3), ("L", math.pi / 3)]).end
    ta = detect_two_arc(O, y)
    assert ta is not None and ta.sweeps == pytest.approx((math.pi / 3, math.pi / 3))
    assert detect_single_arc(O, y) is None
    assert detect_two_arc(O, DirectedPoint(4, 0, 0)) is None


def test_witness_for_c():
    rep = classify(O, DirectedPoint(0.5, 0, 0.3))
    assert rep.condition == "C" and rep.witness is not None
    assert rep.witness.end.is_close(DirectedPoint(0.5, 0, 0.3), 1e-8)
    assert any((k == "S" and v >= 4) or (k != "S" and v >= math.pi) for k, v in rep.witness.steps)


@given(directed_points, directed_points)
def test_distances_and_mapping(x, y):
    _, dll, drr = center_distances(x, y)
    ref = ref_distances(x, y)
    assert (dll, drr) == pytest.approx(ref, abs=1e-12)
    raw = raw_condition(dll, drr)
    assert raw == ("i" if dll >= 4 and drr >= 4 else "ii" if drr >= 4 else "iii" if dll >= 4 else "iv")


@given(directed_points, directed_points)
def test_subcases_exclusive(x, y):
    assert not (detect_single_arc(x, y) and detect_two_arc(x, y))


@given(directed_points, directed_points)
def test_reflection_swaps_ii_iii(x, y):
    g = RigidMotion(reflect=True)
    _, a, b = center_distances(x, y)
    _, c, d = center_distances(g.apply(x), g.apply(y))
    r1, r2 = raw_condition(a, b), raw_condition(c, d)
    assert r2 == {"ii": "iii", "iii": "ii"}.get(r1, r1)


def test_iv_implies_close():
    for x, y in random_pairs(21, 200, box=2.5):
        _, a, b = center_distances(x, y)
        if raw_condition(a, b) == "iv":
            assert x.distance_to(y) < 4


@pytest.mark.parametrize("res", [0.02, 0.01, 0.005])
def test_omega_resolution_stable(res):
    assert detect_omega(O, DirectedPoint(1, 0, 0), res) is not None
    assert classify(O, DirectedPoint(1, 1, math.pi / 2), resolution=res).d_subcase == "SingleArc"
