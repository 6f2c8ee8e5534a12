"""Seeded generators for test and demo inputs."""
from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.integrate import cumulative_trapezoid

from .cspath import CsPath, SampledPath
from .geometry import DirectedPoint


def random_directed_point(rng: np.random.Generator, box: float = 6.0) -> DirectedPoint:
    x, y = rng.uniform(-box, box, 2)
    return DirectedPoint(x, y, rng.uniform(-math.pi, math.pi))


def random_pairs(seed: int, count: int, box: float = 6.0) -> List[Tuple[DirectedPoint, DirectedPoint]]:
    rng = np.random.default_rng(seed)
    return [(random_directed_point(rng, box), random_directed_point(rng, box)) for _ in range(count)]


def random_smooth_path(rng: np.random.Generator, length: float = 5.0, kappa_max: float = 0.95,
                       knots: int = 8, step: float = 0.01, fine: int = 10) -> SampledPath:
    """Unit-speed path whose curvature is a clamped cubic spline in arc length."""
    ks = np.linspace(0.0, length, knots)
    spline = CubicSpline(ks, rng.uniform(-kappa_max, kappa_max, knots))
    n = int(math.ceil(length / step))
    s = np.linspace(0.0, length, n * fine + 1)
    kappa = np.clip(spline(s), -kappa_max, kappa_max)
    theta = rng.uniform(-math.pi, math.pi) + cumulative_trapezoid(kappa, s, initial=0.0)
    p0 = rng.uniform(-3, 3, 2)
    x = p0[0] + cumulative_trapezoid(np.cos(theta), s, initial=0.0)
    y = p0[1] + cumulative_trapezoid(np.sin(theta), s, initial=0.0)
    sel = slice(None, None, fine)
    return SampledPath(s[sel], np.stack([x[sel], y[sel]], axis=1), theta[sel], step)


def random_cs_path(rng: np.random.Generator, n_elements: int = 4, start: DirectedPoint = None,
                   max_sweep: float = math.pi, max_len: float = 3.0) -> CsPath:
    """Alternating-ish random word of arcs and segments."""
    start = start or random_directed_point(rng, 3.0)
    steps = []
    prev = None
    for _ in range(n_elements):
        kinds = [k for k in "LRS" if k != prev]
        k = kinds[rng.integers(len(kinds))]
        v = rng.uniform(0.1, max_len) if k == "S" else rng.uniform(0.1, max_sweep)
        steps.append((k, v))
        prev = k
    return CsPath.from_steps(start, steps)


def random_cscsc(rng: np.random.Generator, start: DirectedPoint = None) -> CsPath:
    start = start or random_directed_point(rng, 3.0)
    word = [rng.choice(["L", "R"]) for _ in range(3)]
    steps = [(word[0], rng.uniform(0.2, 2.5)), ("S", rng.uniform(0.5, 3.0)),
             (word[1], rng.uniform(0.2, 2.5)), ("S", rng.uniform(0.5, 3.0)),
             (word[2], rng.uniform(0.2, 2.5))]
    return CsPath.from_steps(start, steps)


def condition_pairs(seed: int, count: int) -> List[Tuple[DirectedPoint, DirectedPoint]]:
    """Endpoint pairs that cycle through far, mid-range, close-aligned and arc-joined regimes.

    Uniform pairs in a large box are almost never close, so the close
    regimes are drawn explicitly.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        x = random_directed_point(rng, 2.0)
        mode = i % 5
        if mode == 4:
            k = "LR"[rng.integers(2)]
            steps = [(k, rng.uniform(0.3, 3.0))]
            if rng.random() < 0.5:
                steps.append(("RL"[k == "R"], rng.uniform(0.3, 1.5)))
            out.append((x, CsPath.from_steps(x, steps).end))
            continue
        if mode == 0:
            r, a, dh = rng.uniform(6, 10), rng.uniform(0, 2 * math.pi), rng.uniform(-math.pi, math.pi)
        elif mode == 1:
            r, a, dh = rng.uniform(1, 4), rng.uniform(0, 2 * math.pi), rng.uniform(-math.pi, math.pi)
        elif mode == 2:
            r, a, dh = rng.uniform(0.3, 1.8), x.theta + rng.uniform(-0.6, 0.6), rng.uniform(-0.8, 0.8)
        else:
            r, a, dh = rng.uniform(0.5, 3), rng.uniform(0, 2 * math.pi), rng.uniform(-math.pi, math.pi)
        out.append((x, DirectedPoint(x.x + r * math.cos(a), x.y + r * math.sin(a), x.theta + dh)))
    return out
