"""Deforming a smooth path into arcs and segments.

A random path with curvature below one is cut into short pieces. Each piece
is morphed onto the arc-segment-arc path between its own endpoints, and the
frames in between are checked for the curvature bound and for the winding
number, which must not change.
"""
import numpy as np

from bcpaths.corpus import random_smooth_path
from bcpaths.homotopy import fragment, normalize_to_cs
from bcpaths.svg import filmstrip
from bcpaths.winding import closure_path, winding_number

from _out import out_dir

rng = np.random.default_rng(7)
sp = random_smooth_path(rng, length=6.0)
fr = fragment(sp)
print(f"path of length {sp.length:.3f} cut into {len(fr)} fragments, "
      f"longest {fr.lengths.max():.3f}")

lam = closure_path(sp.start, sp.end)
result, trace = normalize_to_cs(sp, closure=lam)
print(f"result: {result.word} with {result.complexity} pieces, length {result.length:.3f}")
print(f"frames {len(trace)}, worst curvature {max(trace.max_curvature):.4f}, "
      f"windings seen {sorted(set(trace.winding))}")
print(f"winding before {winding_number(sp, lam, tol=1e-6)}, after {winding_number(result, lam)}")

(out_dir() / "normalize.svg").write_text(filmstrip(trace.frames))
(out_dir() / "normalize_trace.jsonl").write_text(trace.to_jsonl())
print(f"filmstrip and trace in {out_dir()}")
