"""Two directed points close together and pointing the same way.

The four adjacent circles fence off a small bounded region. Paths that
stay inside it cannot grow: they form a class of their own, next to the
usual free class with the same winding number.
"""
from bcpaths.classifier import classify_space, is_free_class
from bcpaths.geometry import DirectedPoint
from bcpaths.svg import endpoints_figure

from _out import out_dir

x, y = DirectedPoint(0, 0, 0), DirectedPoint(1, 0, 0)
report = classify_space(x, y, n_range=range(-2, 3))
om = report.proximity.omega
print(f"condition {report.condition} ({report.d_subcase}), raw {report.proximity.raw_condition}")
print(f"region area {om.area:.3f}, diameter {om.diameter:.3f}")
print(f"global minimum lies in class k = {report.k}\n")

for n in sorted(report.per_winding):
    entry = report.per_winding[n]
    for c in entry.classes:
        word = c.representative.word if c.representative else "-"
        print(f"n={n:+d} count={entry.count} {c.kind:<13} {word:<8} length {c.minimal_length:.4f}")

inside, outside = report.per_winding[report.k].classes
free, pushes = is_free_class(outside, bound=100)
print(f"\nfree class pushed to length {pushes[-1].length:.1f} in {len(pushes)} moves")
trapped, why = is_free_class(inside)
print(f"trapped class: {why['reason']}")

fig = endpoints_figure(x, y, [inside.representative, outside.representative], om)
(out_dir() / "trapped_class.svg").write_text(fig.render("two classes with the same winding"))
print(f"figure in {out_dir()}")
