"""Perfect-matching bundles avoiding lattice edges, and the augmented graph.

An r-tuple of perfect matchings of the torus vertices is *admissible*
(w.r.t. horizontal reach k) when the matchings are pairwise edge-disjoint
and no matching edge coincides with a stencil edge of the reach-k lattice,
so adding them keeps the graph simple.  The augmented graph is then
(4k+r+2)-regular.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lattice import TorusGraph

__all__ = [
    "MatchingTuple",
    "SamplingError",
    "deterministic_admissible",
    "sample_admissible",
    "is_admissible",
    "augmented_graph",
]


class SamplingError(RuntimeError):
    """Raised when conflict repair fails to converge (parameters too dense)."""


@dataclass(frozen=True)
class MatchingTuple:
    """r perfect matchings on the n x n torus, stored as partner maps.

    ``partners[j][v]`` is the vertex matched to v by matching j; each row is
    a fixed-point-free involution.  ``provenance`` records how the tuple was
    built ("deterministic" or "sampled"); ``seed`` is set for sampled tuples.
    """

    n: int
    partners: np.ndarray
    provenance: str = "deterministic"
    seed: int | None = None

    def __post_init__(self):
        p = np.ascontiguousarray(self.partners, dtype=np.int64)
        if p.ndim != 2 or p.shape[1] != self.n * self.n:
            raise ValueError("partners must have shape (r, n*n)")
        p.setflags(write=False)
        object.__setattr__(self, "partners", p)

    @property
    def r(self) -> int:
        return self.partners.shape[0]

    # -- serialization (schema: {n, r, partners, seed}) ----------------
    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "partners": self.partners.tolist(),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "MatchingTuple":
        partners = np.array(d["partners"], dtype=np.int64).reshape(d["r"], -1)
        seed = d.get("seed")
        return cls(n=d["n"], partners=partners,
                   provenance="deterministic" if seed is None else "sampled",
                   seed=seed)

    @classmethod
    def from_json(cls, s: str) -> "MatchingTuple":
        return cls.from_json_dict(json.loads(s))


def _lattice_edge_mask(n: int, k: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Elementwise: is {u, v} an edge of the reach-k lattice?"""
    dx = (v % n - u % n) % n
    dy = (v // n - u // n) % n
    return ((dy == 1) | (dy == n - 1)) & (np.minimum(dx, n - dx) <= k)


def _is_lattice_edge(n: int, k: int, u: int, v: int) -> bool:
    dy = (v // n - u // n) % n
    if dy != 1 and dy != n - 1:
        return False
    dx = (v % n - u % n) % n
    return min(dx, n - dx) <= k


def deterministic_admissible(n: int, k: int, r: int) -> MatchingTuple:
    """Cyclic-shift construction: matching j pairs (x, y) in the left half
    with (n/2 + (x + j) mod n/2, y).  Matching edges keep y fixed while all
    lattice edges change it by one, so any k is accommodated; distinct
    shifts keep the matchings edge-disjoint, which needs r <= n/2.
    """
    if n % 2:
        raise ValueError("n must be even for perfect matchings")
    if 2 * k + 1 > n:
        raise ValueError(f"2k+1 = {2 * k + 1} > n = {n}")
    if r < 0 or r > n // 2:
        raise ValueError(f"need 0 <= r <= n/2 = {n // 2}, got r={r}")
    half = n // 2
    N = n * n
    idx = np.arange(N, dtype=np.int64)
    xs = idx % n
    ys = idx // n
    partners = np.empty((r, N), dtype=np.int64)
    for j in range(r):
        px = np.where(xs < half, half + (xs + j) % half, (xs - half - j) % half)
        partners[j] = ys * n + px
    return MatchingTuple(n=n, partners=partners, provenance="deterministic")


def _conflict_edges(n, k, partner, others):
    """Canonical (u < partner[u]) conflict list for one matching: lattice
    collisions plus duplicates against the matchings in ``others``."""
    idx = np.arange(n * n, dtype=np.int64)
    bad = _lattice_edge_mask(n, k, idx, partner)
    for other in others:
        bad |= partner == other
    reps = np.flatnonzero(bad & (idx < partner))
    return [(int(u), int(partner[u])) for u in reps]


def sample_admissible(n: int, k: int, r: int, seed,
                      extra_switches: int | None = None) -> MatchingTuple:
    """Sample an approximately uniform admissible r-tuple.

    Pair-and-repair: each matching starts as a uniform pairing of a shuffled
    vertex list; conflicting edges (lattice collisions, duplicates against
    the other matchings) are then repaired by local switchings.  A repair
    picks a conflicting edge uv and a uniformly random edge u'v' of the same
    matching and replaces the pair with {uu', vv'} when neither new edge
    conflicts.  Repair attempts are capped at 100*(initial conflicts + 1);
    exceeding the cap raises SamplingError rather than returning a biased
    tuple silently.

    After repair, ``extra_switches`` random admissible switch moves are
    applied across the tuple (default max(64, 4*initial conflicts)).  The
    switch chain is symmetric with the uniform distribution over admissible
    tuples as its stationary law, so these moves wash out most of the repair
    bias; residual bias is quantified empirically against exhaustive
    enumeration in the test suite.  Deterministic given the seed.
    """
    if n % 2:
        raise ValueError("n must be even for perfect matchings")
    if 2 * k + 1 > n:
        raise ValueError(f"2k+1 = {2 * k + 1} > n = {n}")
    if r < 0:
        raise ValueError("r must be >= 0")
    if 4 * k + r + 1 >= n * n - 1:
        raise ValueError("forbidden degree 4k+r+1 leaves no slack in the pairing")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    seed_val = seed if isinstance(seed, (int, np.integer)) else None
    N = n * n
    partners = np.empty((r, N), dtype=np.int64)

    def edge_ok(j, u, v):
        if _is_lattice_edge(n, k, u, v):
            return False
        for jj in range(r):
            if jj != j and built[jj] and partners[jj, u] == v:
                return False
        return True

    built = [False] * r
    total_initial_conflicts = 0
    for j in range(r):
        perm = rng.permutation(N)
        partner = np.empty(N, dtype=np.int64)
        partner[perm[0::2]] = perm[1::2]
        partner[perm[1::2]] = perm[0::2]
        partners[j] = partner
        built[j] = True
        conflicts = set(_conflict_edges(n, k, partner, partners[:j]))
        total_initial_conflicts += len(conflicts)
        cap = 100 * (len(conflicts) + 1)
        attempts = 0
        while conflicts:
            attempts += 1
            if attempts > cap:
                raise SamplingError(
                    f"matching {j}: repair did not converge within {cap} attempts "
                    f"(n={n}, k={k}, r={r})"
                )
            pick = rng.integers(len(conflicts))
            u, v = next(e for i, e in enumerate(conflicts) if i == pick)
            u2 = int(rng.integers(N))
            if u2 == u or u2 == v:
                continue
            v2 = int(partners[j, u2])
            if not (edge_ok(j, u, u2) and edge_ok(j, v, v2)):
                continue
            partners[j, u], partners[j, u2] = u2, u
            partners[j, v], partners[j, v2] = v2, v
            conflicts.discard((u, v))
            conflicts.discard((min(u2, v2), max(u2, v2)))

    if extra_switches is None:
        extra_switches = max(64, 4 * total_initial_conflicts)
    for _ in range(int(extra_switches) * max(r, 1)):
        if r == 0:
            break
        j = int(rng.integers(r))
        u = int(rng.integers(N))
        v = int(partners[j, u])
        w = int(rng.integers(N))
        if w == u or w == v:
            continue
        z = int(partners[j, w])
        if rng.random() < 0.5:
            a, b, c, d = u, w, v, z
        else:
            a, b, c, d = u, z, v, w
        if edge_ok(j, a, b) and edge_ok(j, c, d):
            partners[j, a], partners[j, b] = b, a
            partners[j, c], partners[j, d] = d, c

    tup = MatchingTuple(n=n, partners=partners, provenance="sampled",
                        seed=int(seed_val) if seed_val is not None else None)
    report = is_admissible(tup, k)
    if not report.ok:
        raise SamplingError("sampler produced an inadmissible tuple: "
                            + "; ".join(report.violations))
    return tup


@dataclass
class AdmissibilityReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_admissible(m: MatchingTuple, k: int) -> AdmissibilityReport:
    """Check all tuple invariants against the reach-k lattice on m.n."""
    n = m.n
    N = n * n
    idx = np.arange(N, dtype=np.int64)
    violations = []
    for j in range(m.r):
        p = m.partners[j]
        if p.min() < 0 or p.max() >= N:
            violations.append(f"matching {j}: partner index out of range")
            continue
        if (p == idx).any():
            violations.append(f"matching {j}: has a fixed point (self-match)")
        if not (p[p] == idx).all():
            violations.append(f"matching {j}: partner map is not an involution")
        hits = np.flatnonzero(_lattice_edge_mask(n, k, idx, p))
        if hits.size:
            u = int(hits[0])
            violations.append(
                f"matching {j}: edge {{{u},{int(p[u])}}} collides with a lattice edge"
            )
    for j in range(m.r):
        for jj in range(j + 1, m.r):
            dup = np.flatnonzero(m.partners[j] == m.partners[jj])
            if dup.size:
                u = int(dup[0])
                violations.append(
                    f"matchings {j} and {jj} share edge "
                    f"{{{u},{int(m.partners[j, u])}}}"
                )
    return AdmissibilityReport(ok=not violations, violations=violations)


def augmented_graph(base: TorusGraph, m: MatchingTuple) -> TorusGraph:
    """The reach lattice plus the matchings of an admissible tuple.

    The result is (4k+r+2)-regular and its r-majority process has activation
    threshold 2k+r+1 at every vertex.
    """
    if base.family != "reach":
        raise ValueError("augmented graph is defined over the reach family")
    if base.n != m.n:
        raise ValueError(f"size mismatch: graph n={base.n}, matchings n={m.n}")
    report = is_admissible(m, base.k)
    if not report.ok:
        raise ValueError("inadmissible matching tuple: " + "; ".join(report.violations))
    return base.with_partners(m.partners)
