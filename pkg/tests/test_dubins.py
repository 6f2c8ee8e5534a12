import math

import numpy as np
import pytest
from hypothesis import given

from bcpaths.corpus import random_pairs
from bcpaths.cspath import sample_path, validate_bounded_curvature
from bcpaths.dubins import (WORD_ORDER, ClassUnreachable, in_class_candidates, minimal_path,
                            minimal_path_in_class, minimizers, solve_all, solve_all_variants)
from bcpaths.geometry import DirectedPoint, RigidMotion
from bcpaths.winding import class_index_k, closure_path, winding_number

from conftest import directed_points, rigid_motions
from oracles import csc_brute, integrate

O = DirectedPoint(0, 0, 0)


def test_straight_is_degenerate_csc():
    m = minimal_path(O, DirectedPoint(4, 0, 0))
    assert m.length == pytest.approx(4.0, abs=1e-12)
    assert m.label == "S-degenerate CSC" and m.path.word == "S"


def test_half_turn_on_shared_circle():
    y = DirectedPoint(0, 2, math.pi)
    lsl = solve_all(O, y)[0]
    assert lsl.word == "LSL" and lsl.path.word == "L"
    assert lsl.length == pytest.approx(math.pi)
    assert minimal_path(O, y).length == pytest.approx(math.pi)


def test_csc_lengths_match_brute_force():
    for x, y in random_pairs(11, 30):
        for c in solve_all(x, y)[:4]:
            ref = csc_brute(x.as_tuple(), y.as_tuple(), c.word)
            if c.feasible:
                assert ref is not None and c.length == pytest.approx(ref, abs=1e-7)
            else:
                assert ref is None


@given(directed_points, directed_points)
def test_candidates_reach_y(x, y):
    for c in solve_all_variants(x, y):
        if not c.feasible:
            continue
        assert c.path.end.is_close(y, 1e-8)
        pts, th = integrate(x.as_tuple(), c.path.steps, per_unit=200)
        assert abs(pts[-1] - complex(y.x, y.y)) < 1e-5


def test_candidates_have_bounded_curvature():
    for x, y in random_pairs(12, 20):
        for c in solve_all(x, y):
            if c.feasible and c.path.elements:
                sp = sample_path(c.path, 0.02)
                if len(sp) >= 3:
                    assert validate_bounded_curvature(sp, end=y).valid


@given(directed_points, directed_points)
def test_minimum_is_minimal(x, y):
    m = minimal_path(x, y)
    feas = [c.length for c in solve_all(x, y) if c.feasible and c.minimizer_ok]
    assert m.length <= min(feas) + 1e-12
    assert m.word in WORD_ORDER


@given(directed_points, directed_points, rigid_motions)
def test_length_invariant_under_rigid_motion(x, y, mo):
    g = RigidMotion(*mo)
    a = minimal_path(x, y).length
    b = minimal_path(g.apply(x), g.apply(y)).length
    assert a == pytest.approx(b, abs=1e-7)


@given(directed_points, directed_points)
def test_reflection_swaps_words(x, y):
    g = RigidMotion(reflect=True)
    m = minimal_path(x, y)
    r = minimal_path(g.apply(x), g.apply(y))
    assert r.length == pytest.approx(m.length, abs=1e-7)


@given(directed_points, directed_points)
def test_time_reversal(x, y):
    # driving backwards: reverse endpoints and headings
    flip = lambda p: DirectedPoint(p.x, p.y, p.theta + math.pi)
    a = minimal_path(x, y).length
    b = minimal_path(flip(y), flip(x)).length
    assert a == pytest.approx(b, abs=1e-7)


def test_ties_reported():
    # symmetric half-turn: both CCC placements tie when y mirrors x
    x, y = DirectedPoint(0, 0, math.pi / 2), DirectedPoint(0.5, 0, -math.pi / 2)
    ms = minimizers(x, y)
    m = minimal_path(x, y)
    assert len(m.ties) == len(ms) and m.multiple == (len(ms) > 1)


def test_in_class_k_equals_global():
    for x, y in random_pairs(13, 20):
        lam = closure_path(x, y)
        k = class_index_k(x, y, lam)
        p = minimal_path_in_class(x, y, lam, k)
        assert p.length == pytest.approx(minimal_path(x, y).length, abs=1e-9)


def test_in_class_neighbours():
    for x, y in random_pairs(14, 20):
        lam = closure_path(x, y)
        k = class_index_k(x, y, lam)
        base = minimal_path(x, y).length
        for n in (k - 2, k - 1, k + 1, k + 2):
            p = minimal_path_in_class(x, y, lam, n)
            assert winding_number(p, lam) == n
            assert p.length >= base - 1e-9
            if abs(n - k) == 1:
                assert p.length <= base + 2 * math.pi + 1e-9
            assert p.end.is_close(y, 1e-8)


def test_in_class_sorted_and_capped():
    x, y = O, DirectedPoint(4, 0, 0)
    lam = closure_path(x, y)
    cands = in_class_candidates(x, y, lam, 3)
    assert [c.length for c in cands] == sorted(c.length for c in cands)
    with pytest.raises(ClassUnreachable):
        minimal_path_in_class(x, y, lam, 40, loop_cap=2)
