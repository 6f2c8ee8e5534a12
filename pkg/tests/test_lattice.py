import math

import numpy as np
import pytest

from bcpaths.corpus import random_pairs
from bcpaths.cspath import CsPath, sample_path, validate_bounded_curvature
from bcpaths.dubins import minimal_path, minimal_path_in_class
from bcpaths.geometry import DirectedPoint
from bcpaths.lattice import (LatticeConfig, OracleUnreachable, exact_tail, shortest_path,
                             shortest_path_in_class)
from bcpaths.winding import closure_path, class_index_k, winding_number

O = DirectedPoint(0, 0, 0)
FAST = LatticeConfig(0.1, heuristic=True)


def test_straight_run():
    r = shortest_path(O, DirectedPoint(4, 0, 0), FAST)
    assert abs(r.length - 4) <= 0.15


def test_primitive_sweep_divides_circle():
    cfg = LatticeConfig(0.1)
    assert cfg.n_headings * cfg.primitive_sweep == pytest.approx(2 * math.pi)
    assert cfg.slack == pytest.approx(1.5 * 1.1)


def test_exact_tail_reaches_goal():
    y = CsPath.from_steps(O, [("L", 0.3), ("S", 0.5), ("R", 0.2)]).end
    L, a, ell, b = exact_tail((0.0, 0.0), 0.0, y, 0.1)
    assert (a, ell, b) == pytest.approx((0.3, 0.5, -0.2))
    assert L == pytest.approx(1.0)


@pytest.mark.parametrize("i", range(4))
def test_never_below_analytic(i):
    x, y = random_pairs(3, 4)[i]
    r = shortest_path(x, y, FAST)
    m = minimal_path(x, y).length
    assert m - 1e-9 <= r.length <= m + FAST.slack
    assert r.path.end.is_close(y, 1e-6)
    assert validate_bounded_curvature(sample_path(r.path, 0.01)).valid


def test_turning_audit():
    r = shortest_path(O, DirectedPoint(2, 3, 2.5), FAST)
    assert r.turning == pytest.approx(r.primitive_turning, abs=1e-9)


@pytest.mark.parametrize("dn", [-1, 0, 1])
def test_in_class_winding(dn):
    x, y = O, DirectedPoint(3, 1, 1.0)
    lam = closure_path(x, y)
    n = class_index_k(x, y, lam) + dn
    r = shortest_path_in_class(x, y, lam, n, FAST)
    assert winding_number(r.path, lam) == n
    m = minimal_path_in_class(x, y, lam, n).length
    assert m - 1e-9 <= r.length <= m + FAST.slack


def test_unreachable_when_budget_tiny():
    with pytest.raises(OracleUnreachable):
        shortest_path(O, DirectedPoint(5, 5, 3.0), LatticeConfig(0.1, max_nodes=10))


def test_bad_config():
    with pytest.raises(ValueError):
        LatticeConfig(0.0)
