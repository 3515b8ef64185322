"""The activation processes: threshold bootstrap and r-majority dynamics.

States are dense boolean arrays over the vertex indices (active = True).
Active vertices never deactivate, so trajectories are monotone and every
run ends in a fixpoint.  Three independent routes to the final state are
provided: synchronous rounds (``step_synchronous``, pure numpy), a frontier
queue (``run_to_fixpoint``, numba), and core peeling on regular graphs
(``final_inactive_via_core``).  Delaying activations never changes the
final state, which is why the frontier queue is a valid substitute for
round-by-round iteration; the queue processes whole generations at a time,
so its round count equals the synchronous one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .lattice import ExplicitGraph, TorusGraph

__all__ = [
    "Rule",
    "FinalState",
    "step_synchronous",
    "run_to_fixpoint",
    "final_inactive_via_core",
    "disseminates",
    "random_initial",
]


@dataclass(frozen=True)
class Rule:
    """Activation rule.

    kind "bootstrap": an inactive vertex activates once it has at least
    ``value`` active neighbours.  kind "majority": a vertex of degree d
    activates once active minus inactive neighbours is at least ``value``,
    i.e. it has at least ceil((d + value)/2) active neighbours.
    """

    kind: str
    value: int

    def __post_init__(self):
        if self.kind not in ("bootstrap", "majority"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "bootstrap" and self.value < 1:
            raise ValueError("bootstrap rule needs value >= 1")
        if self.kind == "majority" and self.value < 0:
            raise ValueError("majority rule needs value >= 0")

    def threshold(self, degree):
        """Active-neighbour threshold at the given degree (scalar or array)."""
        if self.kind == "bootstrap":
            if np.ndim(degree):
                return np.full_like(np.asarray(degree), self.value)
            return self.value
        return -((np.asarray(degree) + self.value) // -2) if np.ndim(degree) \
            else -((degree + self.value) // -2)


def majority(r: int) -> Rule:
    return Rule("majority", r)


def bootstrap(j: int) -> Rule:
    return Rule("bootstrap", j)


@dataclass
class FinalState:
    """Outcome of running a process to its fixpoint."""

    active: np.ndarray
    rounds: int

    @property
    def disseminated(self) -> bool:
        return bool(self.active.all())

    @property
    def inactive_count(self) -> int:
        return int(self.active.size - self.active.sum())


def _as_state(g, a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype != bool:
        raise TypeError("state must be a boolean array")
    if a.shape != (g.n_vertices,):
        raise ValueError(f"state has shape {a.shape}, expected ({g.n_vertices},)")
    return a


def active_neighbor_counts(g, active: np.ndarray) -> np.ndarray:
    """Active-neighbour count of every vertex, computed with plain numpy.

    For stencil graphs this shifts the whole grid once per offset; for CSR
    graphs it scatters over the adjacency of active vertices.  Kept free of
    the numba kernels so it can serve as an independent reference.
    """
    active = _as_state(g, active)
    if isinstance(g, TorusGraph):
        n = g.n
        grid = active.reshape(n, n)
        counts = np.zeros((n, n), dtype=np.int32)
        for dx, dy in g.offsets:
            counts += np.roll(np.roll(grid, -int(dy), axis=0), -int(dx), axis=1)
        counts = counts.reshape(-1)
        for j in range(g.partners.shape[0]):
            counts += active[g.partners[j]]
        return counts
    counts = np.zeros(g.n_vertices, dtype=np.int32)
    for v in np.flatnonzero(active):
        counts[g.indices[g.indptr[v]:g.indptr[v + 1]]] += 1
    return counts


def step_synchronous(g, rule: Rule, active: np.ndarray) -> np.ndarray:
    """One synchronous round: all inactive vertices meeting the threshold
    activate simultaneously.  Returns a new state array."""
    active = _as_state(g, active)
    counts = active_neighbor_counts(g, active)
    thresholds = rule.threshold(g.degrees())
    return active | (counts >= thresholds)


def run_synchronous(g, rule: Rule, active: np.ndarray) -> FinalState:
    """Iterate step_synchronous until stable.  Reference implementation;
    quadratic in the worst case, use run_to_fixpoint for real work."""
    state = _as_state(g, active).copy()
    rounds = 0
    while True:
        nxt = step_synchronous(g, rule, state)
        if np.array_equal(nxt, state):
            return FinalState(active=state, rounds=rounds)
        state = nxt
        rounds += 1


def run_to_fixpoint(g, rule: Rule, active: np.ndarray) -> FinalState:
    """Run the process to its final state with the frontier queue."""
    state = _as_state(g, active).copy()
    if isinstance(g, TorusGraph):
        thr = int(rule.threshold(g.degree))
        rounds = _kernels.run_stencil(g.n, g.offsets, g.partners, state, thr)
    elif isinstance(g, ExplicitGraph):
        thr = np.asarray(rule.threshold(g.degrees()), dtype=np.int32)
        rounds = _kernels.run_csr(g.indptr, g.indices, state, thr)
    else:
        raise TypeError(f"unsupported graph type {type(g).__name__}")
    return FinalState(active=state, rounds=int(rounds))


def final_inactive_via_core(g, rule: Rule, active: np.ndarray) -> np.ndarray:
    """Final inactive set via core peeling, valid on regular graphs only.

    With threshold j on a d-regular graph, the vertices that never activate
    are exactly the (d-j+1)-core of the subgraph induced by the initially
    inactive vertices.
    """
    if not g.is_regular:
        raise ValueError("core characterization requires a regular graph")
    active = _as_state(g, active)
    d = g.degree
    j = int(rule.threshold(d))
    core_threshold = d - j + 1
    member = (~active).copy()
    if isinstance(g, TorusGraph):
        _kernels.core_stencil(g.n, g.offsets, g.partners, member, core_threshold)
    elif isinstance(g, ExplicitGraph):
        _kernels.core_csr(g.indptr, g.indices, member, core_threshold)
    else:
        raise TypeError(f"unsupported graph type {type(g).__name__}")
    return member


def disseminates(g, rule: Rule, active: np.ndarray) -> bool:
    """True iff every vertex is active in the final state."""
    return run_to_fixpoint(g, rule, active).disseminated


def random_initial(n_vertices: int, p: float, seed) -> np.ndarray:
    """Independent Bernoulli(p) initial state, deterministic given seed.

    ``seed`` may be an int, a SeedSequence, or a Generator.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.random(n_vertices) < p
