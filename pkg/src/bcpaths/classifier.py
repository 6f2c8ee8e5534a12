"""Number and kind of homotopy classes in each winding class.

The counts follow a fixed decision table keyed on the proximity condition
and on whether n is the class index k of the global minimum. Each class
gets a constructed representative that is checked against the invariants
the table implies (winding, containment in Ω, embeddedness).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .cspath import CsPath, SampledPath, path_to_json, sample_path, self_crossings
from .dubins import (ClassUnreachable, _same_path, in_class_candidates, minimal_path,
                     minimal_path_in_class, minimizers)
from .geometry import EPS_GEOM, DirectedPoint
from .homotopy import PushInfeasible, push_witness
from .proximity import OmegaRegion, ProximityReport, classify
from .winding import ClosurePath, class_index_k, closure_path, winding_number

FREE = "Free"
NON_FREE_OMEGA = "NonFreeOmega"
ISOLATED = "IsolatedPoint"


@dataclass
class ClassInfo:
    kind: str
    representative: Optional[CsPath]
    minimal_length: float
    winding: Optional[int] = None
    in_omega: Optional[bool] = None
    self_crossings: Optional[int] = None
    error: Optional[str] = None
    # context needed to build witnesses
    n: int = 0
    x: Optional[DirectedPoint] = field(default=None, repr=False)
    y: Optional[DirectedPoint] = field(default=None, repr=False)
    closure: Optional[ClosurePath] = field(default=None, repr=False)
    omega: Optional[OmegaRegion] = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "minimalLength": self.minimal_length, "winding": self.winding}
        if self.representative is not None:
            out["representative"] = path_to_json(self.representative)
            out["word"] = self.representative.word
        if self.in_omega is not None:
            out["inOmega"] = self.in_omega
        if self.self_crossings is not None:
            out["selfCrossings"] = self.self_crossings
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class ClassEntry:
    n: int
    count: int
    classes: List[ClassInfo]

    def to_json(self, sign: int = 1) -> dict:
        return {"n": sign * self.n, "count": self.count,
                "classes": [dict(c.to_json(), winding=None if c.winding is None else sign * c.winding)
                            for c in self.classes]}


@dataclass
class ClassificationReport:
    x: DirectedPoint
    y: DirectedPoint
    proximity: ProximityReport
    closure: ClosurePath
    k: int
    per_winding: Dict[int, ClassEntry]
    minimal_witnesses: List[Tuple[str, int, float]] = field(default_factory=list)

    @property
    def condition(self) -> str:
        return self.proximity.condition

    @property
    def d_subcase(self) -> Optional[str]:
        return self.proximity.d_subcase

    def to_json(self, clockwise_positive: bool = False) -> dict:
        sign = -1 if clockwise_positive else 1
        return {
            "x": list(self.x.as_tuple()), "y": list(self.y.as_tuple()),
            "condition": self.condition, "dSubcase": self.d_subcase,
            "rawCondition": self.proximity.raw_condition,
            "k": sign * self.k,
            "signConvention": "clockwise-positive" if clockwise_positive else "counterclockwise-positive",
            "closure": {"word": self.closure.word, "pinned": self.closure.pinned,
                        "path": path_to_json(self.closure.path)},
            "minimalWitnesses": [{"word": w, "n": sign * n, "length": L}
                                 for w, n, L in self.minimal_witnesses],
            "perWinding": [self.per_winding[n].to_json(sign)
                           for n in sorted(self.per_winding, key=lambda m: sign * m)],
        }


def membership_delta_omega(path: SampledPath, omega: OmegaRegion, tol: float = EPS_GEOM):
    """``(True, None)`` if every sample lies in Ω, else ``(False, first_exit_index)``.

    Containment uses the mask dilated by one cell. Samples within the cusp
    reach of x or y count as inside when they avoid the open disks, since
    the grid cannot resolve the cusps themselves.
    """
    pts = path.points
    clear = np.ones(len(pts), dtype=bool)
    for c in omega.centers:
        clear &= np.linalg.norm(pts - np.asarray(c), axis=1) >= 1.0 - tol
    inside = omega.contains(pts, dilate=1)
    near = np.zeros(len(pts), dtype=bool)
    for a in omega.anchors:
        near |= np.linalg.norm(pts - np.asarray(a), axis=1) <= omega.reach + omega.resolution
    ok = clear & (inside | near)
    if ok.all():
        return True, None
    return False, int(np.argmin(ok))


def _in_omega(path: CsPath, omega: OmegaRegion, step: float) -> bool:
    return membership_delta_omega(sample_path(path, step), omega)[0]


def _info(kind, path, x, y, closure, n, omega=None, step=0.01, error=None) -> ClassInfo:
    if path is None:
        return ClassInfo(kind, None, math.inf, None, error=error, n=n, x=x, y=y, closure=closure,
                         omega=omega)
    info = ClassInfo(kind, path, path.length, winding_number(path, closure), n=n, x=x, y=y,
                     closure=closure, omega=omega)
    if omega is not None:
        info.in_omega = _in_omega(path, omega, step)
    if kind != FREE:
        info.self_crossings = self_crossings(path)
    return info


def classify_space(x: DirectedPoint, y: DirectedPoint, closure: Optional[ClosurePath] = None,
                   n_range: Iterable[int] = range(-3, 4), resolution: float = 0.01,
                   loop_cap: int = 8, sample_step: float = 0.01) -> ClassificationReport:
    prox = classify(x, y, resolution=resolution)
    closure = closure or closure_path(x, y)
    k = class_index_k(x, y, closure)
    n_range = sorted(set(n_range) | {k})
    omega = prox.omega
    entries: Dict[int, ClassEntry] = {}
    for n in n_range:
        if prox.condition == "D" and n == k:
            entries[n] = _split_entry(x, y, closure, n, prox, loop_cap, sample_step)
            continue
        try:
            rep = minimal_path_in_class(x, y, closure, n, loop_cap)
            info = _info(FREE, rep, x, y, closure, n)
        except ClassUnreachable as exc:
            info = _info(FREE, None, x, y, closure, n, error=str(exc))
        entries[n] = ClassEntry(n, 1, [info])
    wit = [(m.word, winding_number(m.path, closure), m.length) for m in minimizers(x, y)]
    return ClassificationReport(x, y, prox, closure, k, entries, wit)


def _split_entry(x, y, closure, n, prox: ProximityReport, loop_cap, step) -> ClassEntry:
    cands = in_class_candidates(x, y, closure, n, loop_cap, extra_pairs=1)
    cands = [c for c in cands if c.winding == n]
    if prox.d_subcase == "OmegaRegion":
        om = prox.omega
        inside = outside = None
        gmin = minimal_path(x, y).path
        if winding_number(gmin, closure) == n and _in_omega(gmin, om, step):
            inside = gmin
        for c in cands:
            if inside is not None and outside is not None:
                break
            flag = _in_omega(c.path, om, step)
            if flag and inside is None:
                inside = c.path
            elif not flag and outside is None:
                outside = c.path
        a = _info(NON_FREE_OMEGA, inside, x, y, closure, n, om, step,
                  error=None if inside is not None else "no candidate inside the region")
        b = _info(FREE, outside, x, y, closure, n, om, step,
                  error=None if outside is not None else "no candidate leaving the region")
        return ClassEntry(n, 2, [a, b])
    iso = prox.isolated_path(x)
    other = next((c.path for c in cands if not _same_path(c.path, iso)), None)
    a = _info(ISOLATED, iso, x, y, closure, n)
    b = _info(FREE, other, x, y, closure, n,
              error=None if other is not None else "no second candidate in class")
    return ClassEntry(n, 2, [a, b])


def is_free_class(entry: ClassInfo, bound: float = 100.0):
    """``(True, witnesses)`` for free classes; ``(False, rationale)`` otherwise.

    The witnesses are segment pushes of a class member, the last of which is
    longer than ``bound``.
    """
    if entry.kind == NON_FREE_OMEGA:
        om = entry.omega
        return False, {"reason": "paths inside the region have bounded length",
                       "omegaDiameter": om.diameter if om is not None else None,
                       "omegaArea": om.area if om is not None else None}
    if entry.kind == ISOLATED:
        return False, {"reason": "the class is a single path"}
    bases = []
    if entry.representative is not None:
        bases.append(entry.representative)
    if entry.x is not None:
        for c in in_class_candidates(entry.x, entry.y, entry.closure, entry.n, extra_pairs=1):
            if c.winding == entry.n:
                bases.append(c.path)
    for base in bases:
        if entry.omega is not None and _in_omega(base, entry.omega, 0.01):
            continue
        if not any(k == "S" for k, _ in base.steps):
            continue
        try:
            wit = push_witness(base, bound)
        except PushInfeasible:
            continue
        if entry.closure is not None and any(winding_number(w, entry.closure) != entry.n for w in wit):
            continue
        return True, wit
    raise PushInfeasible("no class member admits a growing push sequence")
