"""Admissible matching bundles and the two-process coupling.

Samples a bundle of random perfect matchings that avoid the lattice edges,
augments the torus graph with them, and shows the containment that makes
the augmented process at majority parameter r at least as infectious as
the bare-lattice process at 2r.
"""

import numpy as np

from majperc.engine import Rule, random_initial, run_to_fixpoint
from majperc.lattice import TorusGraph
from majperc.matchings import (augmented_graph, deterministic_admissible,
                               is_admissible, sample_admissible)

n, k, r = 128, 4, 2
base = TorusGraph.reach(n, k)
print(f"base lattice: {base}")

det = deterministic_admissible(n, k, r)
print(f"deterministic bundle: r={det.r}, admissible={bool(is_admissible(det, k))}")

m = sample_admissible(n, k, r, seed=2026)
print(f"sampled bundle:       r={m.r}, admissible={bool(is_admissible(m, k))}, "
      f"seed={m.seed}")
star = augmented_graph(base, m)
print(f"augmented graph:      {star}")
print(f"activation threshold of majority-{r}: "
      f"{Rule('majority', r).threshold(star.degree)} of {star.degree}\n")

p = 0.35
initial = random_initial(n * n, p, 7)
lat = run_to_fixpoint(base, Rule("majority", 2 * r), initial)
aug = run_to_fixpoint(star, Rule("majority", r), initial)
print(f"same initial set at p={p}:")
print(f"  bare lattice, majority-{2 * r}:   {lat.active.sum():>6} active "
      f"({lat.rounds} rounds)")
print(f"  augmented,    majority-{r}:   {aug.active.sum():>6} active "
      f"({aug.rounds} rounds)")
assert not (lat.active & ~aug.active).any()
print("  containment holds: every vertex the bare process activates, the")
print("  augmented one activates too (the matchings only ever help).")

gain = int(aug.active.sum() - lat.active.sum())
print(f"  the {r} matchings rescued {gain} extra vertices on this run.")
