"""Command-line front end.

Exit status: 0 on success, 1 on usage errors or malformed input, 2 on
domain errors (infeasible requests, unreachable classes). Domain errors
print a JSON object ``{"error": kind, "message": ...}`` on stdout.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .cspath import CsPath, PathError, SampledPath, path_from_json, path_to_json, sample_path
from .geometry import DirectedPoint, GeometryError, scale_to_unit_curvature, unscale_length
from .lattice import LatticeConfig

OUTPUT_ENV = "BCPATHS_OUTPUT_DIR"


class UsageError(ValueError):
    pass


class DomainError(RuntimeError):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass
class RunConfig:
    kappa: float = 1.0
    eps: float = 1e-9
    omega_resolution: float = 0.01
    target_len: float = 0.9
    p_steps: int = 20
    loop_cap: int = 8
    oracle: LatticeConfig = field(default_factory=LatticeConfig)
    output_dir: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        for name in ("kappa", "eps", "omega_resolution", "target_len"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise UsageError(f"{name} must be positive, got {v}")
        if self.p_steps < 2 or self.loop_cap < 0:
            raise UsageError("p-steps must be >= 2 and loop-cap >= 0")
        if self.output_dir is None:
            self.output_dir = os.environ.get(OUTPUT_ENV)


# ---------------------------------------------------------------- parsing

def parse_heading(text: str) -> float:
    """``90deg``, ``1.57rad`` or bare radians."""
    t = text.strip().lower()
    try:
        if t.endswith("deg"):
            return math.radians(float(t[:-3]))
        if t.endswith("rad"):
            return float(t[:-3])
        return float(t)
    except ValueError:
        raise UsageError(f"bad heading {text!r}") from None


def parse_point(text: str) -> DirectedPoint:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected x,y,heading but got {text!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"bad coordinates in {text!r}") from None
    p = DirectedPoint(x, y, parse_heading(parts[2]))
    if not all(map(math.isfinite, p.as_tuple())):
        raise UsageError(f"non-finite value in {text!r}")
    return p


def parse_range(text: str) -> List[int]:
    """``-3..3`` (inclusive) or a comma list."""
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad integer range {text!r}") from None


def load_json(path: str):
    src = sys.stdin if path == "-" else None
    try:
        text = src.read() if src else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path} at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from None


def load_cs_path(path: str) -> CsPath:
    try:
        return path_from_json(load_json(path))
    except PathError as exc:
        raise UsageError(f"{path}: {exc}") from None


def load_sampled(path: str) -> SampledPath:
    d = load_json(path)
    if isinstance(d, dict) and "samples" in d:
        try:
            return SampledPath.from_json(d)
        except (PathError, ValueError, IndexError) as exc:
            raise UsageError(f"{path}: bad samples: {exc}") from None
    step = 0.01
    return sample_path(load_cs_path(path), step)


# ---------------------------------------------------------------- output

def _emit(obj, args, name: str):
    text = json.dumps(obj, indent=2)
    print(text)
    out = args.cfg.output_dir
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / f"{name}.json").write_text(text + "\n")


def _write_svg(args, name: str, svg: str):
    target = args.svg
    if target is None:
        return
    if target == "auto":
        target = str(Path(args.cfg.output_dir or ".") / f"{name}.svg")
    Path(target).parent.mkdir(parents=True, exist_ok=True)
    Path(target).write_text(svg)


def _scaled(args):
    x, y, f = scale_to_unit_curvature(args.x, args.y, args.cfg.kappa)
    return x, y, f


# ---------------------------------------------------------------- subcommands

def cmd_plan(args):
    from .dubins import minimal_path, solve_all
    x, y, f = _scaled(args)
    best = minimal_path(x, y)
    cands = []
    for c in solve_all(x, y):
        cands.append({"word": c.word, "feasible": c.feasible,
                      "length": unscale_length(c.length, f) if c.feasible else None})
    out = {"word": best.label, "baseWord": best.word, "length": unscale_length(best.length, f),
           "pathScale": f,  # path geometry is in the unit-curvature frame
           "multiple": best.multiple, "ties": list(best.ties),
           "steps": [[k, v] for k, v in best.path.steps], "path": path_to_json(best.path),
           "candidates": cands}
    _emit(out, args, "plan")
    if args.svg is not None:
        from .svg import endpoints_figure
        _write_svg(args, "plan", endpoints_figure(x, y, [best.path]).render("plan"))


def cmd_plan_in_class(args):
    from .dubins import ClassUnreachable, minimal_path_in_class
    from .winding import closure_path, report_sign, winding_number
    x, y, f = _scaled(args)
    lam = closure_path(x, y)
    n = report_sign(args.n, args.clockwise_positive)
    try:
        p = minimal_path_in_class(x, y, lam, n, args.cfg.loop_cap)
    except ClassUnreachable as exc:
        raise DomainError("class-unreachable", str(exc)) from None
    out = {"n": args.n, "word": p.word, "length": unscale_length(p.length, f),
           "winding": report_sign(winding_number(p, lam), args.clockwise_positive),
           "path": path_to_json(p)}
    _emit(out, args, "plan-in-class")


def cmd_classify(args):
    from .proximity import classify
    x, y, _ = _scaled(args)
    rep = classify(x, y, resolution=args.cfg.omega_resolution, eps=args.cfg.eps)
    _emit(rep.to_json(), args, "classify")
    if args.svg is not None:
        from .svg import endpoints_figure
        paths = [p for p in (rep.isolated_path(x), rep.witness) if p is not None]
        _write_svg(args, "classify", endpoints_figure(x, y, paths, rep.omega).render("proximity"))


def cmd_classify_space(args):
    from .classifier import classify_space
    from .winding import report_sign
    x, y, _ = _scaled(args)
    ns = [report_sign(n, args.clockwise_positive) for n in args.n]
    rep = classify_space(x, y, n_range=ns, resolution=args.cfg.omega_resolution,
                         loop_cap=args.cfg.loop_cap)
    _emit(rep.to_json(args.clockwise_positive), args, "classify-space")
    if args.svg is not None:
        from .svg import endpoints_figure
        reps = [c.representative for e in rep.per_winding.values() for c in e.classes
                if c.representative is not None and e.count == 2]
        _write_svg(args, "classify-space",
                   endpoints_figure(x, y, reps, rep.proximity.omega).render("classes"))


def cmd_winding(args):
    from .winding import ClosurePath, closure_path, report_sign, turning_map, winding_number
    path = load_cs_path(args.path)
    if args.closure:
        lam = ClosurePath(load_cs_path(args.closure), pinned=False)
        if not lam.matches(path.start, path.end, 1e-6):
            raise DomainError("closure-mismatch", "closure does not join the path end to its start")
    else:
        lam = closure_path(path.start, path.end)
    n = winding_number(path, lam)
    out = {"n": report_sign(n, args.clockwise_positive), "turning": path.turning,
           "closureTurning": lam.turning, "closureWord": lam.word,
           "tau": turning_map(path).table()}
    _emit(out, args, "winding")


def cmd_normalize(args):
    from .homotopy import CurvatureViolation, normalize_to_cs
    sp = load_sampled(args.path)
    try:
        result, trace = normalize_to_cs(sp, args.cfg.target_len, args.cfg.p_steps)
    except CurvatureViolation as exc:
        raise DomainError("curvature-violation", str(exc)) from None
    out = {"word": result.word, "complexity": result.complexity, "length": result.length,
           "path": path_to_json(result), "frames": len(trace),
           "maxCurvature": max(trace.max_curvature), "winding": trace.winding[-1]}
    _emit(out, args, "normalize")
    _trace_outputs(args, trace, "normalize")


def cmd_deform(args):
    from .homotopy import CurvatureViolation, deform_fragment_to_replacement
    from .winding import closure_path
    sp = load_sampled(args.path)
    if sp.length >= 1.0:
        raise DomainError("fragment-invalid", f"fragment length {sp.length:.6g} is not below 1")
    try:
        trace = deform_fragment_to_replacement(sp, p_steps=args.cfg.p_steps)
    except CurvatureViolation as exc:
        raise DomainError("curvature-violation", str(exc)) from None
    trace.annotate(closure_path(sp.start, sp.end), sp.start, sp.end)
    rep = trace.cs_frames[-1]
    out = {"frames": len(trace), "maxCurvature": max(trace.max_curvature),
           "windings": sorted(set(trace.winding)),
           "replacement": path_to_json(rep) if rep is not None else None}
    _emit(out, args, "deform")
    _trace_outputs(args, trace, "deform")


def _trace_outputs(args, trace, name):
    if args.trace:
        Path(args.trace).parent.mkdir(parents=True, exist_ok=True)
        Path(args.trace).write_text(trace.to_jsonl())
    if args.svg is not None:
        from .svg import filmstrip
        _write_svg(args, name, filmstrip(trace.frames))


def cmd_oracle(args):
    from .lattice import OracleUnreachable, shortest_path, shortest_path_in_class
    from .winding import closure_path, report_sign
    x, y, f = _scaled(args)
    cfg = LatticeConfig(args.step, args.goal_tolerance, heuristic=args.heuristic,
                        turning_bins=args.n is not None)
    try:
        if args.n is None:
            r = shortest_path(x, y, cfg)
        else:
            n = report_sign(args.n, args.clockwise_positive)
            r = shortest_path_in_class(x, y, closure_path(x, y), n, cfg)
    except OracleUnreachable as exc:
        raise DomainError("oracle-unreachable", str(exc)) from None
    out = r.to_json()
    out["length"] = unscale_length(r.length, f)
    out["slack"] = cfg.slack
    _emit(out, args, "oracle")


def cmd_render(args):
    from .svg import endpoints_figure
    paths = [load_cs_path(p) for p in args.paths]
    if args.x is not None and args.y is not None:
        fig = endpoints_figure(args.x, args.y, paths)
    else:
        from .svg import PALETTE, Figure
        fig = Figure()
        for i, p in enumerate(paths):
            fig.path(p, PALETTE[i % len(PALETTE)])
    if args.svg is None:
        args.svg = "auto"
    _write_svg(args, "render", fig.render("paths"))
    print(json.dumps({"paths": len(paths)}))


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--kappa", type=float, default=1.0, help="curvature bound")
    g.add_argument("--eps", type=float, default=1e-9, help="geometric tolerance")
    g.add_argument("--resolution", type=float, default=0.01, help="region grid resolution")
    g.add_argument("--target-len", type=float, default=0.9, help="fragment length target")
    g.add_argument("--p-steps", type=int, default=20, help="frames per deformation")
    g.add_argument("--loop-cap", type=int, default=8)
    g.add_argument("--output-dir", default=None, help=f"artifact directory (default ${OUTPUT_ENV})")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--clockwise-positive", action="store_true",
                   help="report winding numbers with clockwise turning positive")
    ap = argparse.ArgumentParser(prog="bcpaths", description="Bounded-curvature path tools.")
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def endpoints(p, required=True):
        p.add_argument("--x", type=parse_point, required=required, help="x,y,heading[deg|rad]")
        p.add_argument("--y", type=parse_point, required=required, help="x,y,heading[deg|rad]")

    def svg(p):
        p.add_argument("--svg", nargs="?", const="auto", default=None, help="write an SVG figure")

    p = sub.add_parser("plan", help="shortest path between directed points")
    endpoints(p), svg(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("plan-in-class", help="shortest path with a given winding number")
    endpoints(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_plan_in_class)

    p = sub.add_parser("classify", help="proximity condition of the endpoints")
    endpoints(p), svg(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("classify-space", help="homotopy classes per winding number")
    endpoints(p), svg(p)
    p.add_argument("--n", type=parse_range, default=list(range(-3, 4)), help="e.g. -3..3")
    p.set_defaults(func=cmd_classify_space)

    p = sub.add_parser("winding", help="winding number of a path JSON")
    p.add_argument("path")
    p.add_argument("--closure", help="closure path JSON (default: minimal path y to x)")
    p.set_defaults(func=cmd_winding)

    for name, func, helptext in (("normalize", cmd_normalize, "deform a path to cs form"),
                                 ("deform", cmd_deform, "deform one fragment onto its replacement")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("path", help="cs path JSON or sampled path JSON")
        p.add_argument("--trace", help="write frames as JSON lines")
        svg(p)
        p.set_defaults(func=func)

    p = sub.add_parser("oracle", help="lattice search for comparison")
    endpoints(p)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--goal-tolerance", type=float, default=LatticeConfig.goal_tolerance)
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--n", type=int, default=None, help="restrict to a winding number")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("render", help="draw path JSON files")
    p.add_argument("paths", nargs="+")
    endpoints(p, required=False)
    svg(p)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let "--n -3..3" through; argparse would read "-3..3" as an option
    for i in range(len(argv) - 1, 0, -1):
        if argv[i - 1].startswith("--") and "=" not in argv[i - 1] and argv[i][:1] == "-" \
                and argv[i][1:2].isdigit():
            argv[i - 1:i + 1] = [f"{argv[i - 1]}={argv[i]}"]
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        args.cfg = RunConfig(args.kappa, args.eps, args.resolution, args.target_len, args.p_steps,
                             args.loop_cap, output_dir=args.output_dir, seed=args.seed)
        np.random.seed(args.cfg.seed)
        args.func(args)
    except UsageError as exc:
        print(f"bcpaths: error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}))
        return 2
    except (GeometryError, PathError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
