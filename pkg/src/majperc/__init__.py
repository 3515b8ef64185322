"""Strong-majority bootstrap percolation on augmented toroidal lattices.

Subpackages by concern: ``lattice`` (torus graphs, metrics, tessellation),
``matchings`` (admissible matching bundles and the augmented graph),
``engine`` (the activation processes and core characterization), ``growth``
(deterministic shape growth and its verifiers), ``ubiquity`` (cell-level
diagnostics), ``theory`` (closed-form and numeric constants), ``harness``
(Monte Carlo orchestration), and ``cli``.
"""

from .engine import (FinalState, Rule, disseminates, final_inactive_via_core,
                     random_initial, run_to_fixpoint, step_synchronous)
from .lattice import ExplicitGraph, Tessellation, TorusGraph, tessellate, torus_distance
from .matchings import (MatchingTuple, SamplingError, augmented_graph,
                        deterministic_admissible, is_admissible, sample_admissible)
from .theory import (critical_probability, binom_half_tail, binom_lower_tail,
                     non_dissemination_degree_bounds, parameter_window,
                     wheel_critical_probability)

__version__ = "0.1.0"

__all__ = [
    "Rule", "FinalState", "run_to_fixpoint", "step_synchronous",
    "final_inactive_via_core", "disseminates", "random_initial",
    "TorusGraph", "ExplicitGraph", "Tessellation", "tessellate", "torus_distance",
    "MatchingTuple", "SamplingError", "deterministic_admissible",
    "sample_admissible", "is_admissible", "augmented_graph",
    "critical_probability", "binom_half_tail", "binom_lower_tail",
    "wheel_critical_probability", "parameter_window",
    "non_dissemination_degree_bounds",
]
