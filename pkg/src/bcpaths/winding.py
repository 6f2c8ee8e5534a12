"""Turning maps, closure paths and winding numbers.

Turning is measured counterclockwise-positive. Reports that follow the
clockwise-positive labeling flip the sign at the output boundary only.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from .cspath import CsPath, SampledPath
from .dubins import WORD_ORDER, minimal_path
from .geometry import TWO_PI, DirectedPoint, wrap_angle

INTEGRALITY_TOL = 1e-9


class CorruptedLift(ArithmeticError):
    """Total turning of a closed curve is not a multiple of 2pi."""


class WindingDiagnostic(UserWarning):
    pass


@dataclass(frozen=True)
class TurningMap:
    breakpoints: Tuple[Tuple[float, float], ...]

    @property
    def total(self) -> float:
        return self.breakpoints[-1][1] - self.breakpoints[0][1]

    def __call__(self, s):
        s_k, t_k = np.array(self.breakpoints).T
        return np.interp(s, s_k, t_k)

    def table(self) -> List[List[float]]:
        return [[float(a), float(b)] for a, b in self.breakpoints]


def turning_map(path: CsPath) -> TurningMap:
    s, tau = 0.0, path.start.theta
    bps = [(s, tau)]
    for e in path.elements:
        s += e.length
        tau += e.turning
        bps.append((s, tau))
    return TurningMap(tuple(bps))


def _total_turning(path: Union[CsPath, SampledPath]) -> float:
    return path.turning


def relative_winding(path: CsPath) -> Tuple[float, bool]:
    """``rho = (tau(s) - z) / 2pi`` with ``z`` the end heading in (-pi, pi].

    Returns ``(rho, is_integer)``.
    """
    tau_end = turning_map(path).breakpoints[-1][1]
    z = wrap_angle(tau_end)
    rho = (tau_end - z) / TWO_PI
    return rho, abs(rho - round(rho)) <= INTEGRALITY_TOL


@dataclass(frozen=True)
class ClosurePath:
    """A fixed minimal path from y back to x used to close paths in Γ(x, y)."""

    path: CsPath
    pinned: bool = True
    word: str = ""

    @property
    def turning(self) -> float:
        return self.path.turning

    def matches(self, x: DirectedPoint, y: DirectedPoint, tol: float = 1e-9) -> bool:
        return self.path.start.is_close(y, tol) and self.path.end.is_close(x, tol)


def closure_path(x: DirectedPoint, y: DirectedPoint) -> ClosurePath:
    """Minimal path y -> x; ties broken by the canonical word order."""
    m = minimal_path(y, x)
    return ClosurePath(m.path, True, m.word)


def winding_number(path: Union[CsPath, SampledPath], closure: ClosurePath,
                   tol: float = INTEGRALITY_TOL) -> int:
    w = (_total_turning(path) + closure.turning) / TWO_PI
    n = round(w)
    if abs(w - n) > tol:
        raise CorruptedLift(f"winding {w!r} is not an integer (residual {abs(w - n):.3g})")
    return int(n)


def winding_residual(path: Union[CsPath, SampledPath], closure: ClosurePath) -> float:
    w = (_total_turning(path) + closure.turning) / TWO_PI
    return abs(w - round(w))


def class_index_k(x: DirectedPoint, y: DirectedPoint, closure: ClosurePath) -> int:
    k = winding_number(minimal_path(x, y).path, closure)
    if k not in (-1, 0, 1):
        warnings.warn(f"class index k={k} outside {{-1, 0, 1}}", WindingDiagnostic)
    return k


def report_sign(n: int, clockwise_positive: bool) -> int:
    return -n if clockwise_positive else n
