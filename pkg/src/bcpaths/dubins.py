"""Shortest bounded-curvature paths between directed points.

Candidates are built from tangent constructions between adjacent circles;
degenerate components (zero sweep or zero length) fall out of the
construction and are dropped from the stored path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cspath import CsPath, PathError
from .geometry import (EPS_GEOM, LEFT, RIGHT, TWO_PI, DirectedPoint, adjacent_center, left_normal,
                       mod2pi)

WORD_ORDER = ("LSL", "RSR", "LSR", "RSL", "LRL", "RLR")
_ORIENT = {"L": LEFT, "R": RIGHT}


class ClassUnreachable(RuntimeError):
    """No candidate reaches the requested winding number within the loop cap."""


@dataclass(frozen=True)
class DubinsCandidate:
    word: str
    path: Optional[CsPath]
    length: float
    feasible: bool
    steps: Tuple[Tuple[str, float], ...] = ()
    middle_sweep: Optional[float] = None
    minimizer_ok: bool = False  # eligible as a global minimizer
    variant: int = 0  # which middle-circle placement for CCC words
    ties: Tuple[str, ...] = ()

    @property
    def multiple(self) -> bool:
        return len(self.ties) > 1

    @property
    def label(self) -> str:
        """Word as stored; flags degenerate forms such as ``S-degenerate CSC``."""
        if self.path is None:
            return self.word
        actual = self.path.word
        family = "CCC" if self.word in ("LRL", "RLR") else "CSC"
        if actual == self.word:
            return self.word
        if not actual:
            return f"empty-degenerate {family}"
        return f"{actual}-degenerate {family}"


def _snap(sweep: float) -> float:
    if sweep < EPS_GEOM or TWO_PI - sweep < EPS_GEOM:
        return 0.0
    return sweep


def _sweep(orientation: int, h_from: float, h_to: float) -> float:
    return mod2pi(orientation * (h_to - h_from))


def _infeasible(word: str, variant: int = 0) -> DubinsCandidate:
    return DubinsCandidate(word, None, math.inf, False, variant=variant)


def _make(word: str, x: DirectedPoint, steps, middle=None, variant=0) -> DubinsCandidate:
    path = CsPath.from_steps(x, steps)
    ok = True if middle is None else middle > math.pi
    return DubinsCandidate(word, path, path.length, True, tuple(steps), middle, ok, variant)


def _csc(x: DirectedPoint, y: DirectedPoint, word: str) -> DubinsCandidate:
    o1, o2 = _ORIENT[word[0]], _ORIENT[word[2]]
    c1 = adjacent_center(x, o1)
    c2 = adjacent_center(y, o2)
    v = c2 - c1
    d = float(np.hypot(*v))
    alpha = math.atan2(v[1], v[0])
    if o1 == o2:
        if d < EPS_GEOM:
            # same circle: a single arc
            a = _snap(_sweep(o1, x.theta, y.theta))
            return _make(word, x, [(word[0], a), ("S", 0.0), (word[2], 0.0)])
        phi, ell = alpha, d
    else:
        if d < 2.0 - EPS_GEOM:
            return _infeasible(word)
        ell = math.sqrt(max(0.0, d * d - 4.0))
        phi = alpha + o1 * math.atan2(2.0, ell)
    a = _snap(_sweep(o1, x.theta, phi))
    b = _snap(_sweep(o2, phi, y.theta))
    return _make(word, x, [(word[0], a), ("S", ell), (word[2], b)])


def _ccc(x: DirectedPoint, y: DirectedPoint, word: str) -> List[DubinsCandidate]:
    o = _ORIENT[word[0]]
    c1 = adjacent_center(x, o)
    c2 = adjacent_center(y, o)
    v = c2 - c1
    d = float(np.hypot(*v))
    if d > 4.0 + EPS_GEOM:
        return [_infeasible(word, 0), _infeasible(word, 1)]
    alpha = math.atan2(v[1], v[0])
    beta = math.acos(min(1.0, d / 4.0))
    out = []
    for variant, sgn in enumerate((1.0, -1.0)):
        ang = alpha + sgn * beta
        c3 = c1 + 2.0 * np.array([math.cos(ang), math.sin(ang)])
        # headings at the two tangency points
        h1 = ang + o * math.pi / 2
        w = c3 - c2
        h2 = math.atan2(w[1], w[0]) + o * math.pi / 2
        a = _snap(_sweep(o, x.theta, h1))
        m = _sweep(-o, h1, h2)
        b = _snap(_sweep(o, h2, y.theta))
        out.append(_make(word, x, [(word[0], a), (word[1], m), (word[2], b)], middle=m,
                         variant=variant))
    return out


def solve_all_variants(x: DirectedPoint, y: DirectedPoint) -> List[DubinsCandidate]:
    """Every construction, including both middle-circle placements of CCC words."""
    out = [_csc(x, y, w) for w in WORD_ORDER[:4]]
    out += _ccc(x, y, "LRL") + _ccc(x, y, "RLR")
    return out


def solve_all(x: DirectedPoint, y: DirectedPoint) -> List[DubinsCandidate]:
    """One candidate per word in canonical order (best CCC placement)."""
    allc = solve_all_variants(x, y)
    out = allc[:4]
    for word in ("LRL", "RLR"):
        vs = [c for c in allc[4:] if c.word == word]
        feas = [c for c in vs if c.feasible]
        out.append(min(feas, key=lambda c: c.length) if feas else vs[0])
    return out


def _same_path(a: CsPath, b: CsPath, tol: float = 1e-9) -> bool:
    sa, sb = a.canonical().steps, b.canonical().steps
    return len(sa) == len(sb) and all(k1 == k2 and abs(v1 - v2) <= tol
                                      for (k1, v1), (k2, v2) in zip(sa, sb))


def minimizers(x: DirectedPoint, y: DirectedPoint, tol: float = EPS_GEOM) -> List[DubinsCandidate]:
    """All geometrically distinct minimal candidates in canonical word order."""
    cands = [c for c in solve_all_variants(x, y) if c.feasible and c.minimizer_ok]
    best = min(c.length for c in cands)
    out: List[DubinsCandidate] = []
    for c in sorted(cands, key=lambda c: (WORD_ORDER.index(c.word), c.variant)):
        if c.length <= best + tol and not any(_same_path(c.path, o.path) for o in out):
            out.append(c)
    return out


def minimal_path(x: DirectedPoint, y: DirectedPoint, tol: float = EPS_GEOM) -> DubinsCandidate:
    """Shortest path; ``ties`` lists the words of every distinct minimizer."""
    ms = minimizers(x, y, tol)
    return replace(ms[0], ties=tuple(m.word for m in ms))


# ---------------------------------------------------------------- winding classes

def _closure_path(closure) -> CsPath:
    return closure.path if hasattr(closure, "path") else closure


def _winding(path_turning: float, closure_turning: float) -> int:
    return int(round((path_turning + closure_turning) / TWO_PI))


@dataclass(frozen=True)
class ClassCandidate:
    path: CsPath
    length: float
    base_word: str
    loops: int  # signed number of full loops added (ccw positive)
    placement: str
    winding: int


def _with_loops(x: DirectedPoint, steps: Sequence[Tuple[str, float]], loops: int,
                where: str) -> Optional[CsPath]:
    """Insert ``|loops|`` full loops turning in the sign of ``loops``."""
    if loops == 0:
        return CsPath.from_steps(x, steps)
    k = "L" if loops > 0 else "R"
    extra = TWO_PI * abs(loops)
    steps = [list(s) for s in steps if s[1] > 0]
    arcs = [i for i, s in enumerate(steps) if s[0] in "LR"]
    if where == "start":
        if steps and steps[0][0] == k:
            steps[0][1] += extra
        else:
            steps.insert(0, [k, extra])
    elif where == "end":
        if steps and steps[-1][0] == k:
            steps[-1][1] += extra
        else:
            steps.append([k, extra])
    elif where == "middle":
        mids = [i for i in arcs if 0 < i < len(steps) - 1 and steps[i][0] == k]
        if not mids:
            return None
        steps[mids[0]][1] += extra
    else:
        raise ValueError(where)
    return CsPath.from_steps(x, [tuple(s) for s in steps])


def in_class_candidates(x: DirectedPoint, y: DirectedPoint, closure, n: int,
                        loop_cap: int = 8, extra_pairs: int = 0) -> List[ClassCandidate]:
    """Base words with full loops added so the winding number is ``n``.

    With ``extra_pairs`` > 0, cancelling loop pairs (one each way) are also
    inserted; these do not change the class but change the shape.
    """
    lam = _closure_path(closure)
    t_lam = lam.turning
    out: List[ClassCandidate] = []
    for c in solve_all_variants(x, y):
        if not c.feasible:
            continue
        w = _winding(c.path.turning, t_lam)
        m = n - w
        if abs(m) > loop_cap:
            continue
        seen = []
        for where in ("start", "middle", "end"):
            p = _with_loops(x, c.steps, m, where)
            if p is None or any(_same_path(p, q) for q in seen):
                continue
            seen.append(p)
            out.append(ClassCandidate(p, p.length, c.word, m, where, _winding(p.turning, t_lam)))
            for e in range(1, extra_pairs + 1):
                for first in ("start", "end"):
                    second = "end" if first == "start" else "start"
                    q = _with_loops(x, p.steps, e, first)
                    q = _with_loops(x, q.steps, -e, second) if q is not None else None
                    if q is not None:
                        out.append(ClassCandidate(q, q.length, c.word, m, f"{where}+pair{e}{first}",
                                                  _winding(q.turning, t_lam)))
    out.sort(key=lambda c: (round(c.length, 9), WORD_ORDER.index(c.base_word)))
    return out


def minimal_path_in_class(x: DirectedPoint, y: DirectedPoint, closure, n: int,
                          loop_cap: int = 8) -> CsPath:
    cands = [c for c in in_class_candidates(x, y, closure, n, loop_cap) if c.winding == n]
    if not cands:
        raise ClassUnreachable(f"winding {n} not reachable within loop cap {loop_cap}")
    return cands[0].path


@dataclass(frozen=True)
class _FixedTurning:
    turning: float


def candidates_with_turning(x: DirectedPoint, y: DirectedPoint, turning: float,
                            loop_cap: int = 8) -> List[ClassCandidate]:
    """In-class candidates whose total turning equals ``turning``."""
    shim = _FixedTurning(-turning)
    return [c for c in in_class_candidates(x, y, shim, 0, loop_cap) if c.winding == 0]
