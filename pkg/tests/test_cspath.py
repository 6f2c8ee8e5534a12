import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcpaths.corpus import random_cs_path
from bcpaths.cspath import (CsPath, InsufficientData, PathError, SampledPath, closed_crossings,
                            length, path_from_json, path_to_json, sample_path, self_crossings,
                            transversal_crossings, validate_bounded_curvature)
from bcpaths.geometry import DirectedPoint, RigidMotion

from conftest import directed_points, rigid_motions, steps
from oracles import integrate, polyline_crossings

O = DirectedPoint(0, 0, 0)


def circle_samples(radius, n=400):
    t = np.linspace(0, 2 * math.pi * radius, n)
    pts = np.stack([radius * np.sin(t / radius), radius - radius * np.cos(t / radius)], axis=1)
    return SampledPath(t, pts, t / radius, t[1])


def test_lengths():
    assert length(CsPath.from_steps(O, [("L", math.pi / 2)])) == pytest.approx(math.pi / 2)
    assert length(CsPath.from_steps(O, [("S", 4)])) == 4
    p = CsPath.from_steps(O, [("L", math.pi / 2), ("S", 3), ("L", math.pi / 2)])
    assert p.length == pytest.approx(3 + math.pi)
    assert p.complexity == 3 and p.word == "LSL"


def test_curvature_validation():
    rep = validate_bounded_curvature(circle_samples(1.0), tol=1e-3)
    assert rep.valid and abs(rep.max_curvature - 1) < 1e-3
    seg = SampledPath(np.linspace(0, 4, 50), np.stack([np.linspace(0, 4, 50), np.zeros(50)], 1),
                      np.zeros(50), 0.1)
    rep = validate_bounded_curvature(seg)
    assert rep.valid and rep.max_curvature < 1e-9
    rep = validate_bounded_curvature(circle_samples(0.5))
    assert not rep.valid and rep.violations
    with pytest.raises(InsufficientData):
        validate_bounded_curvature(seg.slice(0, 1))


@given(directed_points, steps)
def test_end_matches_integration(x, st_):
    p = CsPath.from_steps(x, st_)
    pts, th = integrate(x.as_tuple(), st_)
    assert abs(complex(*p.end.point) - pts[-1]) < 1e-6
    assert math.isclose(math.cos(th - p.end.theta), 1.0, abs_tol=1e-9)


@given(directed_points, steps)
def test_sampled_is_valid(x, st_):
    p = CsPath.from_steps(x, st_)
    sp = sample_path(p, 0.02)
    rep = validate_bounded_curvature(sp, tol=1e-3, start=x, end=p.end)
    assert rep.valid
    # every junction is a sample
    for off in p.offsets:
        assert np.min(np.abs(sp.s - off)) < 1e-12


def test_sample_length_agrees(rng):
    for _ in range(100):
        p = random_cs_path(rng, int(rng.integers(1, 6)))
        step = 0.05
        sp = sample_path(p, step)
        chord = np.sum(np.linalg.norm(np.diff(sp.points, axis=0), axis=1))
        assert abs(chord - p.length) <= step ** 2 * p.complexity * p.length


def test_g1_enforced():
    a = CsPath.from_steps(O, [("L", 1.0)])
    b = CsPath.from_steps(DirectedPoint(5, 5, 0), [("S", 1.0)])
    with pytest.raises(PathError):
        a.concat(b)


@given(directed_points, steps)
def test_json_round_trip(x, st_):
    p = CsPath.from_steps(x, st_)
    q = path_from_json(json.dumps(path_to_json(p)))
    assert q.start == p.start and q.word == p.word
    assert np.allclose([v for _, v in q.steps], [v for _, v in p.steps], atol=1e-12)


def test_json_errors():
    with pytest.raises(PathError):
        path_from_json({"start": {"x": 0, "y": 0}, "elements": []})
    with pytest.raises(PathError):
        path_from_json({"start": {"x": 0, "y": 0, "theta": 0},
                        "elements": [{"type": "arc", "orientation": "Q", "sweep": 1}]})


def test_sampled_json_round_trip():
    sp = sample_path(CsPath.from_steps(O, [("L", 1), ("S", 2)]), 0.1)
    back = SampledPath.from_json(json.loads(json.dumps(sp.to_json())))
    assert np.allclose(back.points, sp.points) and np.allclose(back.headings, sp.headings)


def test_crossings_simple():
    circle = CsPath.from_steps(O, [("L", 2 * math.pi)])
    assert closed_crossings(circle) == 0
    # two tangent unit circles traversed in opposite senses, closed at the origin
    eight = CsPath.from_steps(O, [("L", 2 * math.pi), ("R", 2 * math.pi)])
    assert closed_crossings(eight) == 1


def test_single_loop_crosses_once():
    word = [("S", 1.5), ("L", 1.75 * math.pi), ("S", 2.0)]
    p = CsPath.from_steps(O, word)
    pts, _ = integrate(O.as_tuple(), word, per_unit=300)
    assert polyline_crossings(pts) == 1
    assert self_crossings(p) == 1


def test_crossings_match_polyline_oracle(rng):
    for _ in range(40):
        p = random_cs_path(rng, int(rng.integers(2, 7)), max_sweep=1.8 * math.pi)
        pts, _ = integrate(p.start.as_tuple(), p.steps, per_unit=150)
        assert self_crossings(p) == polyline_crossings(pts)


def test_crossings_with_closure():
    from bcpaths.winding import closure_path
    x, y = DirectedPoint(0, 0, 0), DirectedPoint(4, 0, 0)
    lam = closure_path(x, y).path
    seg = CsPath.from_steps(x, [("S", 4)])
    pts = np.concatenate([integrate(x.as_tuple(), seg.steps, 200)[0],
                          integrate(y.as_tuple(), lam.steps, 200)[0][1:]])
    assert transversal_crossings(seg, lam) == polyline_crossings(pts[:-1], closed=True)


@given(directed_points, steps, rigid_motions)
def test_crossings_invariant_under_rigid_motion(x, st_, m):
    p = CsPath.from_steps(x, st_)
    assert self_crossings(p.transformed(RigidMotion(*m))) == self_crossings(p)
