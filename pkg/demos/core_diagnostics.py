"""Anatomy of a stuck run: the inactive core and its cell diagnostics.

Runs the augmented-torus majority process at a density below the finite-size
threshold, peels the equivalent core directly, and inspects the surviving
inactive region: which tessellation cells it touches, their component
structure, the ubiquity report of the active remainder, and the matched-
quadruple necessary condition that every small surviving component obeys.
"""

import numpy as np

from majperc.engine import (Rule, final_inactive_via_core, random_initial,
                            run_to_fixpoint)
from majperc.lattice import TorusGraph, tessellate
from majperc.matchings import augmented_graph, sample_admissible
from majperc.ubiquity import (cell_components, check_core_matching,
                              check_ubiquity, diameter_stats, inactive_cell_mask)

n, k, r, t, p = 256, 6, 2, 32, 0.33
m = sample_admissible(n, k, r, seed=11)
g = augmented_graph(TorusGraph.reach(n, k), m)
rule = Rule("majority", r)
print(f"{g}; majority-{r} threshold {rule.threshold(g.degree)} of {g.degree}, "
      f"initial density p={p}")

initial = random_initial(n * n, p, seed=5)
final = run_to_fixpoint(g, rule, initial)
inactive = ~final.active
print(f"fixpoint after {final.rounds} rounds: {inactive.sum()} vertices "
      f"({inactive.mean():.1%}) never activate")

core = final_inactive_via_core(g, rule, initial)
assert np.array_equal(core, inactive)
print(f"identical to the (2k+2)-core = {2 * k + 2}-core of the induced "
      "inactive subgraph (peeled independently)\n")

tess = tessellate(n, t)
mask = inactive_cell_mask(tess, inactive)
print(f"tessellation: {tess.cells_per_axis}x{tess.cells_per_axis} cells of "
      f"side {t}; {mask.sum()} touch the core")

comps = cell_components(mask, "linf")
for i, c in enumerate(comps):
    print(f"  component {i}: {c.size} cells, Chebyshev diameter {c.diam}")

stats = diameter_stats(mask)
print("cells by component diameter d -> (N_d, cumulative):",
      {d: v for d, v in stats.items() if v[0]})

rep = check_ubiquity(~mask, eps=float(k) ** -100)
print(f"\nactive-cell set: connected={rep.connected}, density {rep.size}/"
      f"{rep.total_cells}, ubiquitous={rep.ubiquitous}")

cm = check_core_matching(tess, inactive, m, k)
status = "skipped: " + cm.reason if cm.skipped else \
    ("holds" if cm.passed else "VIOLATED (bug)")
print(f"matched-quadruple condition on small surviving components: {status}")
for cells, diam, matched, checked in cm.components:
    tag = "checked" if checked else "too wide, exempt"
    print(f"  component of {len(cells)} cells (diam {diam}): "
          f"{matched} vertices matched into the core [{tag}]")
