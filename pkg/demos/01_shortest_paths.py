"""Shortest bounded-curvature paths between a few directed points.

Every pair gets all six candidate words; the winner is drawn together with
the adjacent circles of both endpoints.
"""
import math

from bcpaths.dubins import minimal_path, solve_all
from bcpaths.geometry import DirectedPoint
from bcpaths.svg import endpoints_figure

from _out import out_dir

x = DirectedPoint(0, 0, 0)
targets = {
    "ahead": DirectedPoint(4, 0, 0),
    "quarter-turn": DirectedPoint(1, 1, math.pi / 2),
    "behind": DirectedPoint(-1, 0.5, 0),
    "u-turn": DirectedPoint(0, 3, math.pi),
}

for name, y in targets.items():
    print(f"\n{name}: {y.as_tuple()}")
    for c in sorted(solve_all(x, y), key=lambda c: c.length):
        shown = f"{c.length:.4f}" if c.feasible else "infeasible"
        print(f"  {c.word}: {shown}")
    best = minimal_path(x, y)
    print(f"  -> {best.label}, steps {[(k, round(v, 4)) for k, v in best.path.steps]}")
    svg = endpoints_figure(x, y, [best.path]).render(name)
    (out_dir() / f"plan_{name}.svg").write_text(svg)

# Paths that only differ by a full loop land in different winding classes.
# Each extra loop costs 2*pi of length, so the in-class minimum grows
# in steps of that size away from the global minimum.
from bcpaths.dubins import minimal_path_in_class
from bcpaths.winding import class_index_k, closure_path

y = targets["ahead"]
lam = closure_path(x, y)
k = class_index_k(x, y, lam)
print(f"\nclass of the global minimum: k = {k}")
for n in range(k - 2, k + 3):
    p = minimal_path_in_class(x, y, lam, n)
    print(f"  n = {n:+d}: {p.word:<6} length {p.length:.4f}")
print(f"\nfigures in {out_dir()}")
