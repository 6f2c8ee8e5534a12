import math

import numpy as np
import pytest

from bcpaths.corpus import random_cs_path, random_cscsc, random_smooth_path
from bcpaths.cspath import CsPath, PathError, SampledPath, sample_path, validate_bounded_curvature
from bcpaths.dubins import minimal_path
from bcpaths.geometry import DirectedPoint
from bcpaths.homotopy import (AxisFrame, SkewInfeasible, collapse_figure_eight,
                              deform_fragment_to_replacement, fragment, fragment_condition,
                              in_region_rz, normalize_to_cs, orthogonal_homotopy_step,
                              origin_slope_closed_form, push_witness, radial_curvature,
                              radial_homotopy_step, radial_map_curvature, reduce_complexity,
                              replacement_path, skew_homotopy, type_i_operation, type_ii_operation)
from bcpaths.winding import closure_path, winding_number

O = DirectedPoint(0, 0, 0)
TAU = 2 * math.pi
OFFSETS = [0, 0.25, 0.5, 1, 2, 5, 10]


# ---------------------------------------------------------------- curvature model

@pytest.mark.parametrize("x", OFFSETS)
def test_model_starts_at_minus_one(x):
    assert radial_curvature(0.0, 0.0, x)[0] == pytest.approx(-1.0, abs=1e-12)
    assert radial_curvature(0.0, 0.0, x, mirrored=True)[0] == pytest.approx(1.0, abs=1e-12)


def test_model_derivative_matches_finite_differences():
    h = 1e-6
    for x in OFFSETS:
        for p in np.linspace(0, 0.1, 20):
            for th in np.linspace(-0.1, 0.1, 20):
                d = radial_curvature(p, th, x)[1]
                fd = (radial_curvature(p + h, th, x)[0] - radial_curvature(p - h, th, x)[0]) / (2 * h)
                assert d == pytest.approx(fd, abs=1e-6)


def test_closed_form_values():
    assert origin_slope_closed_form(0) == 1.0
    assert origin_slope_closed_form(1) == pytest.approx(1 + 1 / 4 + 1 / 8)


@pytest.mark.parametrize("x", OFFSETS)
def test_model_slope_matches_closed_form(x):
    assert radial_curvature(0.0, 0.0, x)[1] == pytest.approx(origin_slope_closed_form(x), abs=1e-12)


def test_identity_at_zero_offset():
    # projection center at the arc's own center: nothing moves
    for p in (0.0, 0.3, 0.7):
        assert radial_map_curvature(p, 0.0) == pytest.approx(1.0, abs=1e-6)
    assert radial_curvature(0.0, 0.0, 0.0)[1] == 0.0


@pytest.mark.parametrize("x", [0.25, 0.5, 1, 2, 5, 10])
def test_model_slope_signs(x):
    assert radial_curvature(0.0, 0.0, x)[1] > 0
    assert radial_curvature(0.0, 0.0, x, mirrored=True)[1] < 0


# ---------------------------------------------------------------- fragments

def test_fragment_counts(rng):
    sp = sample_path(CsPath.from_steps(O, [("L", 1.0), ("S", 1.0), ("R", 1.0)]), 0.01)
    fr = fragment(sp, 0.9)
    assert len(fr) >= 4
    assert fr.lengths.sum() == pytest.approx(3.0, abs=1e-9)
    assert np.all(fr.lengths < 1)


def test_fragments_trapped(rng):
    for _ in range(10):
        p = random_cs_path(rng, 4)
        sp = sample_path(p, 0.01)
        fr = fragment(sp)
        for i, j in zip(fr.indices[:-1], fr.indices[1:]):
            z = DirectedPoint(*sp.points[i], sp.headings[i])
            assert in_region_rz(z, sp.points[i:j + 1]).all()
            ze = DirectedPoint(*sp.points[j], sp.headings[j])
            assert fragment_condition(z, ze, sp.s[j] - sp.s[i]).condition == "D"


def test_replacements():
    seg = CsPath.from_steps(O, [("S", 0.8)])
    assert replacement_path(O, seg.end).steps == pytest.approx([("S", 0.8)])
    q = CsPath.from_steps(O, [("L", math.pi / 2)])
    beta = replacement_path(O, q.end)
    assert all(v < math.pi for k, v in beta.steps if k != "S")
    assert beta.end.is_close(q.end, 1e-9)


# ---------------------------------------------------------------- projection steps

def test_radial_step():
    r = 1.7
    t = np.linspace(0, 2, 80)
    sp = SampledPath(r * t, r * np.stack([np.cos(t), np.sin(t)], 1), t + math.pi / 2, 0.05)
    same = radial_homotopy_step(sp, (0, 0), 0.0)
    assert np.allclose(same.points, sp.points)
    proj = radial_homotopy_step(sp, (0, 0), 1.0)
    assert np.allclose(np.linalg.norm(proj.points, axis=1), 1.0)


def test_orthogonal_step():
    u = np.linspace(-0.5, 0.5, 40)
    sp = SampledPath(u + 0.5, np.stack([u, np.full_like(u, 0.3)], 1), np.zeros_like(u), 0.05)
    frame = AxisFrame((0.0, 0.0), 0.0)
    assert np.allclose(orthogonal_homotopy_step(sp, frame, 0.0).points, sp.points)
    half = orthogonal_homotopy_step(sp, frame, 0.5)
    assert np.allclose(half.points[:, 0], 0.5 * u) and np.allclose(half.points[:, 1], 0.3)
    # full collapse onto (0, v0) is not a path any more
    with pytest.raises(PathError):
        orthogonal_homotopy_step(sp, frame, 1.0)


# ---------------------------------------------------------------- deformations

def test_own_replacement_is_single_frame():
    sp = sample_path(CsPath.from_steps(O, [("L", math.pi / 2)]), 0.01)
    assert len(deform_fragment_to_replacement(sp)) == 1


def _smooth_fragment(rng):
    sp = random_smooth_path(rng, length=0.8, knots=4)
    return sp


def test_fragment_trace_valid(rng):
    sp = _smooth_fragment(rng)
    tr = deform_fragment_to_replacement(sp, p_steps=50)
    tr.annotate(closure_path(sp.start, sp.end), sp.start, sp.end)
    assert len(tr) == 50
    assert max(tr.max_curvature) <= 1.02
    assert len(set(tr.winding)) == 1
    assert max(tr.endpoint_residual) < 1e-6


def test_c1_steps_shrink(rng):
    sp = _smooth_fragment(rng)
    worst = [max(deform_fragment_to_replacement(sp, p_steps=n).c1_steps()) for n in (10, 20, 40)]
    assert worst[1] <= worst[0] and worst[2] <= worst[1]
    assert worst[0] / worst[2] > 2


def test_normalize_cs_input_is_fixpoint(rng):
    p = random_cs_path(rng, 3)
    out, _ = normalize_to_cs(sample_path(p, 0.01))
    assert out.length == pytest.approx(p.length, abs=1e-6)
    assert out.end.is_close(p.end, 1e-6)


def test_normalize_smooth(rng):
    for _ in range(5):
        sp = random_smooth_path(rng)
        lam = closure_path(sp.start, sp.end)
        out, tr = normalize_to_cs(sp)
        assert out.end.is_close(sp.end, 1e-6)
        assert winding_number(out, lam) == winding_number(sp, lam, tol=1e-6)
        assert validate_bounded_curvature(sample_path(out, 0.01)).valid


def test_normalize_rejects_sharp_input():
    t = np.linspace(0, 1, 100)
    sp = SampledPath(t, 0.3 * np.stack([np.cos(t / 0.3), np.sin(t / 0.3)], 1), t / 0.3 + math.pi / 2)
    from bcpaths.homotopy import CurvatureViolation
    with pytest.raises(CurvatureViolation):
        normalize_to_cs(sp)


# ---------------------------------------------------------------- reduction and moves

def test_reduce_keeps_csc():
    x, y = O, DirectedPoint(3, 4, 1.0)
    m = minimal_path(x, y).path
    assert reduce_complexity(m).steps == pytest.approx(m.steps)


def test_reduce_collinear_cscsc():
    p = CsPath.from_steps(O, [("L", 0.5), ("S", 1.0), ("L", 1e-3), ("R", 1e-3), ("S", 1.0), ("R", 0.5)])
    q = reduce_complexity(p)
    assert q.complexity <= 3 and q.length <= p.length + 1e-12
    assert q.end.is_close(p.end, 1e-8)


def test_reduce_random_cscsc(rng):
    for _ in range(5):
        p = random_cscsc(rng)
        q = reduce_complexity(p)
        assert q.complexity < p.complexity and q.length <= p.length + 1e-9
        assert q.end.is_close(p.end, 1e-8)
        lam = closure_path(p.start, p.end)
        assert winding_number(q, lam) == winding_number(p, lam)


def test_type_i():
    p = CsPath.from_steps(O, [("S", 4)])
    lam = closure_path(O, p.end)
    q = type_i_operation(p, 2.0)
    assert winding_number(q, lam) == winding_number(p, lam)
    assert q.length == pytest.approx(p.length + 2 * TAU)
    back = collapse_figure_eight(q)
    assert back.steps == pytest.approx(p.steps) and back.end.is_close(p.end, 1e-9)


def test_type_ii():
    p = CsPath.from_steps(O, [("S", 4)])
    assert type_ii_operation(p, 0, 0) is p
    q = type_ii_operation(p, 0, 0.3)
    assert q.length > p.length and q.end.is_close(p.end, 1e-8)
    assert q.complexity >= 5
    wit = push_witness(p, 100)
    assert wit[-1].length > 100
    lam = closure_path(O, p.end)
    assert {winding_number(w, lam) for w in wit} == {winding_number(p, lam)}


def test_skew():
    p = CsPath.from_steps(O, [("R", 1.0), ("S", 6.0), ("L", 1.0)])
    tr = skew_homotopy(p)
    assert tr.cs_frames[-1].word == "LSR"
    assert tr.cs_frames[-1].end.is_close(p.end, 1e-8)
    assert len(set(tr.winding)) == 1
    with pytest.raises(SkewInfeasible):
        skew_homotopy(CsPath.from_steps(O, [("R", 1.0), ("S", 2.0), ("L", 1.0)]))
