"""Cell-level diagnostics: components, ubiquity, and matched-core checks.

A cell set lives on the tessellation grid (cells_per_axis^2 cells, torus
adjacency).  "Ubiquitous" sets are connected, nearly full, and have a
complement whose connected pieces obey a logarithmic diameter profile;
surviving inactive regions of an augmented-lattice run are diagnosed
against that profile and against the matched-quadruple necessary condition
(every small component of inactive-touching cells must contain at least
four vertices matched into the inactive core).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import Tessellation
from .matchings import MatchingTuple

__all__ = [
    "UBIQUITY_A",
    "DIAMETER_BOUND_B",
    "CUMULATIVE_BOUND_B",
    "ComponentSummary",
    "cell_components",
    "chebyshev_diameter",
    "UbiquityReport",
    "check_ubiquity",
    "exact_ubiquity_condition",
    "diameter_stats",
    "claim_diameter_bound",
    "claim_cumulative_bound",
    "inactive_cell_mask",
    "CoreMatchingReport",
    "check_core_matching",
    "is_stable_collection",
]

UBIQUITY_A = 10**8        # density / diameter-profile constant
DIAMETER_BOUND_B = 10**6  # per-diameter cell-count bound constant
CUMULATIVE_BOUND_B = 11 * DIAMETER_BOUND_B

_L1_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))
_LINF_STEPS = tuple((di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1)
                    if (di, dj) != (0, 0))


def _circular_diameter(values: np.ndarray, n: int) -> int:
    """Max circular distance between any two of the given coordinates."""
    vals = np.unique(values)
    if vals.size <= 1:
        return 0
    d = np.abs(vals[:, None] - vals[None, :])
    return int(np.minimum(d, n - d).max())


def chebyshev_diameter(cells: np.ndarray, n: int) -> int:
    """Torus Chebyshev diameter of a set of (i, j) cells.

    The max over pairs of max(dx, dy) splits into per-axis circular
    diameters because both maxima range over the same pair set.
    """
    cells = np.asarray(cells)
    if cells.size == 0:
        return 0
    return max(_circular_diameter(cells[:, 0], n),
               _circular_diameter(cells[:, 1], n))


@dataclass
class ComponentSummary:
    """One maximal connected piece of a cell set."""

    cells: np.ndarray      # (size, 2) cell coordinates
    size: int
    diam: int              # torus Chebyshev diameter


def cell_components(mask: np.ndarray, metric: str = "linf") -> list[ComponentSummary]:
    """Maximal connected components of a boolean cell grid.

    metric "l1" uses 4-adjacency, "linf" 8-adjacency, both toroidal.  BFS
    seeded in ascending cell order, so output order is deterministic.
    """
    if metric == "l1":
        steps = _L1_STEPS
    elif metric == "linf":
        steps = _LINF_STEPS
    else:
        raise ValueError(f"unknown metric {metric!r}")
    nh = mask.shape[0]
    seen = np.zeros_like(mask, dtype=bool)
    out = []
    for si in range(nh):
        for sj in range(nh):
            if not mask[si, sj] or seen[si, sj]:
                continue
            comp = []
            stack = [(si, sj)]
            seen[si, sj] = True
            while stack:
                ci, cj = stack.pop()
                comp.append((ci, cj))
                for di, dj in steps:
                    ni, nj = (ci + di) % nh, (cj + dj) % nh
                    if mask[ni, nj] and not seen[ni, nj]:
                        seen[ni, nj] = True
                        stack.append((ni, nj))
            cells = np.array(sorted(comp), dtype=np.int64)
            out.append(ComponentSummary(cells=cells, size=len(comp),
                                        diam=chebyshev_diameter(cells, nh)))
    return out


def _diameter_budget(eps: float, total_cells: int, j: int) -> float:
    return UBIQUITY_A / math.log(1.0 / eps) * math.log(total_cells / j)


@dataclass
class UbiquityReport:
    """Diagnostic of one cell set against the ubiquity definition."""

    ubiquitous: bool
    connected: bool
    density_ok: bool
    size: int
    total_cells: int
    eps: float
    complement_diameters: list[int] = field(default_factory=list)  # descending
    prefix_bounds: list[float] = field(default_factory=list)
    prefix_ok: list[bool] = field(default_factory=list)
    max_diam_ok: bool = True
    oversized_components: list[int] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "ubiquitous": self.ubiquitous,
            "connected": self.connected,
            "density_ok": self.density_ok,
            "size": self.size,
            "total_cells": self.total_cells,
            "eps": self.eps,
            "complement_diameters": self.complement_diameters,
            "prefix_bounds": self.prefix_bounds,
            "prefix_ok": self.prefix_ok,
            "max_diam_ok": self.max_diam_ok,
            "oversized_components": self.oversized_components,
        }


def check_ubiquity(mask: np.ndarray, eps: float) -> UbiquityReport:
    """Check the ubiquity conditions for a cell set.

    (i) l1-connectivity, (ii) size >= (1 - A*eps) * total, and the
    whole-component prefix form of the diameter profile: with the
    complement's Chebyshev component diameters sorted descending as
    D_1 >= D_2 >= ..., require D_j <= A/log(1/eps) * log(total/j) for every
    j.  The prefix form is a necessary consequence of the full quantifier
    over arbitrary disjoint connected complement subsets (use
    exact_ubiquity_condition for the brute-force exact check on small
    grids).  Components wider than half the grid are also listed separately.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    nh = mask.shape[0]
    total = nh * nh
    size = int(mask.sum())
    connected = len(cell_components(mask, "l1")) == 1
    density_ok = size >= (1.0 - UBIQUITY_A * eps) * total
    comp = cell_components(~mask, "linf")
    diams = sorted((c.diam for c in comp), reverse=True)
    bounds = [_diameter_budget(eps, total, j) for j in range(1, len(diams) + 1)]
    ok = [d <= b for d, b in zip(diams, bounds)]
    max_diam_ok = not diams or diams[0] <= UBIQUITY_A / math.log(1.0 / eps) * math.log(total)
    return UbiquityReport(
        ubiquitous=connected and density_ok and all(ok),
        connected=connected,
        density_ok=density_ok,
        size=size,
        total_cells=total,
        eps=eps,
        complement_diameters=diams,
        prefix_bounds=bounds,
        prefix_ok=ok,
        max_diam_ok=max_diam_ok,
        oversized_components=[d for d in diams if 2 * d > nh],
    )


def exact_ubiquity_condition(mask: np.ndarray, eps: float,
                             max_cells: int = 10) -> bool:
    """Brute-force check of the diameter profile over *arbitrary* disjoint
    connected complement subsets (not just whole components).

    For each count j computes the largest achievable minimum diameter over
    j disjoint connected subsets and compares it with the budget.
    Exponential; refuses complements larger than ``max_cells``.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    nh = mask.shape[0]
    total = nh * nh
    cells = [tuple(c) for c in np.argwhere(~mask)]
    c = len(cells)
    if c == 0:
        return True
    if c > max_cells:
        raise ValueError(f"complement has {c} cells; exact check limited to {max_cells}")
    index = {cell: b for b, cell in enumerate(cells)}
    adj = [0] * c
    for b, (ci, cj) in enumerate(cells):
        for di, dj in _LINF_STEPS:
            w = index.get(((ci + di) % nh, (cj + dj) % nh))
            if w is not None:
                adj[b] |= 1 << w
    connected = np.zeros(1 << c, dtype=bool)
    diam = np.zeros(1 << c, dtype=np.int64)
    for s in range(1, 1 << c):
        first = (s & -s).bit_length() - 1
        reach = 1 << first
        frontier = reach
        while frontier:
            nxt = 0
            b = frontier
            while b:
                low = b & -b
                nxt |= adj[low.bit_length() - 1]
                b ^= low
            nxt &= s & ~reach
            reach |= nxt
            frontier = nxt
        connected[s] = reach == s
        if connected[s]:
            pts = np.array([cells[b] for b in range(c) if s >> b & 1])
            diam[s] = chebyshev_diameter(pts, nh)

    from functools import lru_cache

    @lru_cache(maxsize=None)
    def best_min_diam(remaining: int, j: int) -> float:
        """Max over j disjoint connected subsets of ``remaining`` of the
        minimum diameter; -inf when j subsets do not fit."""
        if j == 0:
            return math.inf
        best = -math.inf
        sub = remaining
        while sub:
            if connected[sub]:
                rest = best_min_diam(remaining & ~sub, j - 1)
                best = max(best, min(int(diam[sub]), rest))
            sub = (sub - 1) & remaining
        return best

    full = (1 << c) - 1
    for j in range(1, c + 1):
        w = best_min_diam(full, j)
        if w > _diameter_budget(eps, total, j):
            return False
    return True


def diameter_stats(mask: np.ndarray) -> dict[int, tuple[int, int]]:
    """Map diameter d -> (cells in components of diameter d, cells in
    components of diameter >= d).  Keys run from 0 to the max observed
    diameter; an absent key means zero."""
    comp = cell_components(mask, "linf")
    if not comp:
        return {}
    max_d = max(c.diam for c in comp)
    n_d = {d: 0 for d in range(max_d + 1)}
    for c in comp:
        n_d[c.diam] += c.size
    out = {}
    cum = 0
    for d in range(max_d, -1, -1):
        cum += n_d[d]
        out[d] = (n_d[d], cum)
    return dict(sorted(out.items()))


def claim_diameter_bound(d: int, eps: float, total_cells: int) -> float:
    """Informational per-diameter bound B * total * eps^ceil((d+1)/4)."""
    return DIAMETER_BOUND_B * total_cells * eps ** math.ceil((d + 1) / 4)


def claim_cumulative_bound(d: int, eps: float, total_cells: int) -> float:
    """Informational cumulative bound 11B * total * eps^ceil((d+1)/5)."""
    return CUMULATIVE_BOUND_B * total_cells * eps ** math.ceil((d + 1) / 5)


def inactive_cell_mask(tess: Tessellation, inactive: np.ndarray) -> np.ndarray:
    """Boolean (nh, nh) grid of cells containing an inactive vertex."""
    nh = tess.cells_per_axis
    ids = tess.vertex_cell_ids()
    mask = np.zeros(nh * nh, dtype=bool)
    mask[np.unique(ids[inactive])] = True
    return mask.reshape(nh, nh)


@dataclass
class CoreMatchingReport:
    """Outcome of the matched-quadruple check on surviving inactive cells."""

    passed: bool
    skipped: bool = False
    reason: str = ""
    components: list = field(default_factory=list)  # (cells, diam, matched, checked)

    def __bool__(self):
        return self.passed or self.skipped


def check_core_matching(tess: Tessellation, u_core: np.ndarray,
                        matching: MatchingTuple, k: int) -> CoreMatchingReport:
    """Verify the necessary condition on surviving inactive regions.

    ``u_core`` must be the final inactive set of the majority process on the
    augmented lattice (the (2k+2)-core of the induced inactive subgraph).
    Every Chebyshev component of inactive-touching cells with diameter at
    most half the cell grid must contain at least 4 distinct vertices
    matched into ``u_core``; a failure indicates a bug in the caller's
    pipeline.  Preconditions 2r < 2k+2 <= t <= n/2 are required for the
    guarantee; out-of-range parameters yield a skipped report.
    """
    n, t, r = tess.n, tess.t, matching.r
    if not (2 * r < 2 * k + 2 <= t <= n // 2):
        return CoreMatchingReport(
            passed=False, skipped=True,
            reason=f"preconditions 2r < 2k+2 <= t <= n/2 unmet "
                   f"(r={r}, k={k}, t={t}, n={n})")
    u_core = np.asarray(u_core, dtype=bool)
    if not u_core.any():
        return CoreMatchingReport(passed=True, reason="empty core: vacuous")
    nh = tess.cells_per_axis
    mask = inactive_cell_mask(tess, u_core)
    ids = tess.vertex_cell_ids()
    matched_any = np.zeros(n * n, dtype=bool)
    for j in range(r):
        matched_any |= u_core[matching.partners[j]]
    comps = []
    passed = True
    for comp in cell_components(mask, "linf"):
        checked = 2 * comp.diam <= nh
        cell_ids = comp.cells[:, 0] * nh + comp.cells[:, 1]
        sel = np.isin(ids, cell_ids)
        matched = int(np.count_nonzero(matched_any & sel))
        comps.append((comp.cells, comp.diam, matched, checked))
        if checked and matched < 4:
            passed = False
    return CoreMatchingReport(passed=passed, components=comps)


def is_stable_collection(tess: Tessellation, cell_sets, matching: MatchingTuple,
                         target: np.ndarray | None = None) -> bool:
    """Is the collection of cell sets stable with respect to the matchings?

    Each set must be Chebyshev-connected and the sets pairwise disjoint
    (violations raise).  Stability: every set's cells contain at least 4
    distinct vertices matched by some matching into ``target``; by default
    ``target`` is the union of all the collection's vertices.
    """
    nh = tess.cells_per_axis
    n = tess.n
    sets = [np.array([tuple(c) for c in s], dtype=np.int64) for s in cell_sets]
    seen = set()
    for s in sets:
        cells = set(map(tuple, s.tolist()))
        if seen & cells:
            raise ValueError("cell sets are not pairwise disjoint")
        seen |= cells
        sub = np.zeros((nh, nh), dtype=bool)
        sub[s[:, 0], s[:, 1]] = True
        if len(cell_components(sub, "linf")) != 1:
            raise ValueError("a cell set is not Chebyshev-connected")
    ids = tess.vertex_cell_ids()
    if target is None:
        all_ids = np.concatenate([s[:, 0] * nh + s[:, 1] for s in sets])
        target = np.isin(ids, all_ids)
    target = np.asarray(target, dtype=bool)
    matched_any = np.zeros(n * n, dtype=bool)
    for j in range(matching.r):
        matched_any |= target[matching.partners[j]]
    for s in sets:
        cell_ids = s[:, 0] * nh + s[:, 1]
        sel = np.isin(ids, cell_ids)
        if int(np.count_nonzero(matched_any & sel)) < 4:
            return False
    return True
