"""Cross-checking the closed-form planner with a brute-force lattice search.

The lattice only knows three motion primitives and closes on the goal with
an exact short tail, so its answer is a real path and can never beat the
true optimum. Refining the step should pull it closer.
"""

from bcpaths.corpus import random_pairs
from bcpaths.dubins import minimal_path
from bcpaths.lattice import LatticeConfig, shortest_path

print(f"{'pair':>4} {'analytic':>9} " + " ".join(f"{'step ' + str(s):>10}" for s in (0.2, 0.1, 0.05)))
for i, (x, y) in enumerate(random_pairs(11, 3)):
    m = minimal_path(x, y).length
    gaps = []
    for s in (0.2, 0.1, 0.05):
        r = shortest_path(x, y, LatticeConfig(s, heuristic=True))
        gaps.append(f"+{r.length - m:.3f}")
    print(f"{i:>4} {m:>9.4f} " + " ".join(f"{g:>10}" for g in gaps))
print(f"\nallowed gap at step 0.1: {LatticeConfig(0.1).slack:.2f}")
