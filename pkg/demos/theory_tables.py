"""Closed-form constants of the strong-majority model, end to end.

Prints the critical-probability table for strict majority on random regular
graphs, the wheel-graph threshold, the non-dissemination degree bounds, and
what the guaranteed-dissemination parameter window looks like at reachable
and at astronomically large torus sizes.
"""

import math

from majperc.theory import (critical_probability, non_dissemination_degree_bounds,
                            parameter_window, parameter_window_log,
                            wheel_critical_probability)

print("Critical probability of dissemination, strict majority on random")
print("d-regular graphs (grid scan + golden-section refinement):\n")
print(f"{'d':>4}  {'p_c':>10}  {'argmin_y':>10}")
for d in range(3, 16):
    cp = critical_probability(d)
    print(f"{d:>4}  {cp.value:>10.6f}  {cp.argmin_y:>10.6f}")

values = {d: critical_probability(d).value for d in range(3, 51)}
best = min(values, key=values.get)
print(f"\nminimum over 3 <= d <= 50: d = {best} with p_c = {values[best]:.6f}")
print("the sequence approaches 1/2 as d grows:",
      ", ".join(f"p_c({d})={critical_probability(d).value:.4f}"
                for d in (51, 101, 201, 401)))

print(f"\nwheel-graph threshold (root of x + x^2 - x^3 = 1/2): "
      f"{wheel_critical_probability():.6f}")

odd, even = non_dissemination_degree_bounds(0.2)
print(f"\nat p = 0.2 dissemination needs degree >= {odd:.0f} (odd) or "
      f"{even:.0f} (even); anything sparser stays stuck.")

print("\nParameter window for guaranteed dissemination:")
w = parameter_window(10**6, p0=0.05)
print(f"  n = 10^6:  density floor p_min = {w.p_min:.1f} > 1  ->  window empty")
w = parameter_window_log(1e15, p0=0.05, p=0.03)
print(f"  log n = 1e15, p = 0.03:  k in [{w.k_min}, {w.k_max}], "
      f"r <= {w.r_max}  ->  nonempty = {w.nonempty}")
print(f"  derived constants there: m = {w.m}, t = 100 k^3 = {w.t}, "
      f"log eps = {w.log_eps:.1f}")
print("\nThe window only opens at sizes far beyond simulation; the Monte")
print("Carlo side of this package measures the finite-size behaviour instead.")
