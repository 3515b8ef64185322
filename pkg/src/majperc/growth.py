"""Deterministic growth: diamond shapes, good vertices, good/seed cells.

The diamond shape is built row by row from a half-width recurrence: the
outermost row has half-width b, the next ``a+1`` rows widen by k per row,
and the central ``m`` rows widen by i*ceil(k/m) at row i.  A vertex is
m-good when each of the four horizontal k-segments diagonally adjacent to
it (one row up / down, to its left / right) holds at least 2*ceil(k/m)
active vertices.  Under the majority rule with parameter r <= ceil(k/m), an
active shape surrounded by good vertices grows deterministically into the
next larger shape; the verifiers below exercise that guarantee by direct
simulation.

Goodness checks require 2*ceil(k/m) <= k (a k-segment cannot hold more than
k active vertices); the quota is unsatisfiable otherwise, e.g. for m = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import Rule, run_to_fixpoint
from .lattice import TorusGraph, Tessellation, tessellate

__all__ = [
    "shape_rows",
    "shape_offsets",
    "shape_points",
    "goodness_quota",
    "good_vertices",
    "is_m_good",
    "goodness_pattern",
    "is_good_cell",
    "is_seed_cell",
    "GrowthCheck",
    "verify_shape_growth",
    "shape_growth_grid",
    "CellScenario",
    "verify_cell_spread",
]

GOOD_CELL_RADIUS_FACTOR = 32  # locality radius of cell goodness is 32*m*k^2


def goodness_quota(k: int, m: int) -> int:
    """Active vertices required in each of the four k-segments."""
    return 2 * math.ceil(k / m)


def _validate_shape_params(k, m, a, b):
    if not 1 <= m <= k:
        raise ValueError(f"need 1 <= m <= k, got m={m}, k={k}")
    if a < 0 or b < 0:
        raise ValueError(f"need a, b >= 0, got a={a}, b={b}")


def shape_rows(k: int, m: int, a: int, b: int) -> np.ndarray:
    """Half-width sequence x_0..x_{m+a+1} of the shape (mirrored for i < 0).

    x_{m+a+1} = b; x_i = x_{i+1} + k for m <= i <= m+a;
    x_i = x_{i+1} + i*ceil(k/m) for 0 <= i <= m-1.
    """
    _validate_shape_params(k, m, a, b)
    step = math.ceil(k / m)
    xs = np.empty(m + a + 2, dtype=np.int64)
    xs[m + a + 1] = b
    for i in range(m + a, m - 1, -1):
        xs[i] = xs[i + 1] + k
    for i in range(m - 1, -1, -1):
        xs[i] = xs[i + 1] + i * step
    return xs


def shape_offsets(k: int, m: int, a: int, b: int) -> np.ndarray:
    """(count, 2) array of (dx, dy) offsets of the shape around its center."""
    xs = shape_rows(k, m, a, b)
    rows = []
    for i in range(-(m + a + 1), m + a + 2):
        half = int(xs[abs(i)])
        dx = np.arange(-half, half + 1, dtype=np.int64)
        rows.append(np.stack([dx, np.full_like(dx, i)], axis=1))
    return np.concatenate(rows, axis=0)


def shape_points(n: int, k: int, m: int, a: int, b: int,
                 center: tuple[int, int] = (0, 0)) -> np.ndarray:
    """Vertex indices of the translated shape on the n-torus.

    Raises if the projected shape overlaps itself (only possible when the
    shape is large relative to n); overlapping translates are rejected
    rather than silently merged.
    """
    offs = shape_offsets(k, m, a, b)
    cx, cy = center
    idx = ((cy + offs[:, 1]) % n) * n + ((cx + offs[:, 0]) % n)
    if np.unique(idx).size != idx.size:
        raise ValueError(
            f"shape (k={k}, m={m}, a={a}, b={b}) overlaps itself on the {n}-torus"
        )
    return idx


def _check_goodness_params(n, k, m):
    if not 1 <= m <= k:
        raise ValueError(f"need 1 <= m <= k, got m={m}, k={k}")
    if 2 * k + 1 > n:
        raise ValueError(f"2k+1 = {2 * k + 1} > n = {n}")
    q = goodness_quota(k, m)
    if q > k:
        raise ValueError(
            f"goodness quota 2*ceil(k/m) = {q} exceeds segment length k = {k}; "
            "supported parameter sets have 2*ceil(k/m) <= k (so m >= 2)"
        )
    return q


def _window_right(grid: np.ndarray, k: int) -> np.ndarray:
    """w[y, x] = number of True entries at columns x+1..x+k (circular)."""
    n = grid.shape[1]
    pad = np.concatenate([grid, grid[:, :k]], axis=1).astype(np.int32)
    c = np.zeros((grid.shape[0], n + k + 1), dtype=np.int32)
    np.cumsum(pad, axis=1, out=c[:, 1:])
    return c[:, k + 1:k + 1 + n] - c[:, 1:1 + n]


def _window_left(grid: np.ndarray, k: int) -> np.ndarray:
    return _window_right(grid[:, ::-1], k)[:, ::-1]


def good_vertices(active: np.ndarray, k: int, m: int) -> np.ndarray:
    """Boolean grid of m-good vertices (vectorized sliding windows)."""
    n = active.shape[0]
    q = _check_goodness_params(n, k, m)
    up = np.roll(active, -1, axis=0)    # row y+1 seen from row y
    down = np.roll(active, 1, axis=0)   # row y-1
    return ((_window_right(up, k) >= q) & (_window_right(down, k) >= q)
            & (_window_left(up, k) >= q) & (_window_left(down, k) >= q))


def is_m_good(x: int, y: int, active: np.ndarray, k: int, m: int) -> bool:
    """Single-vertex goodness by direct enumeration of the four segments."""
    n = active.shape[0]
    q = _check_goodness_params(n, k, m)
    for sx, sy in ((1, 1), (1, -1), (-1, -1), (-1, 1)):
        hits = sum(
            bool(active[(y + sy) % n, (x + sx * i) % n]) for i in range(1, k + 1)
        )
        if hits < q:
            return False
    return True


def goodness_pattern(n: int, k: int, m: int) -> np.ndarray:
    """Active-column pattern that makes every vertex m-good.

    Activates every s-th column with s = max(1, k // (2*ceil(k/m))); any k
    consecutive columns then contain at least floor(k/s) >= 2*ceil(k/m)
    active columns, so all four segments of every vertex meet the quota.
    """
    q = _check_goodness_params(n, k, m)
    s = max(1, k // q)
    grid = np.zeros((n, n), dtype=bool)
    grid[:, ::s] = True
    return grid


def _axis_distance(n: int, lo: int, hi: int) -> np.ndarray:
    """Circular distance of each coordinate in [0, n) to the band [lo, hi)."""
    pos = np.arange(n)
    below = (lo - pos) % n
    above = (pos - (hi - 1)) % n
    out = np.minimum(below, above)
    out[(pos >= lo) & (pos < hi)] = 0
    return out


def is_good_cell(tess: Tessellation, cell: tuple[int, int],
                 active: np.ndarray, k: int, m: int) -> bool:
    """True iff every vertex inside or within l1-distance 32*m*k^2 of the
    cell is m-good or active.  The decision reads no vertex farther than
    32*m*k^2 + k + 1 from the cell."""
    n = tess.n
    radius = GOOD_CELL_RADIUS_FACTOR * m * k * k
    ok = good_vertices(active, k, m) | active
    x0, x1, y0, y1 = tess.cell_bounds(*cell)
    dx = _axis_distance(n, x0, x1)
    dy = _axis_distance(n, y0, y1)
    region = (dy[:, None] + dx[None, :]) <= radius
    return bool(ok[region].all())


def is_seed_cell(tess: Tessellation, cell: tuple[int, int],
                 active: np.ndarray, k: int, m: int) -> bool:
    """True iff some translate of the base shape lies inside the cell fully
    active.  Exhaustive scan over the anchor positions that fit."""
    xs = shape_rows(k, m, 0, 0)
    half_w = int(xs[0])
    half_h = m + 1
    x0, x1, y0, y1 = tess.cell_bounds(*cell)
    ax0, ax1 = x0 + half_w, x1 - half_w   # half-open anchor ranges
    ay0, ay1 = y0 + half_h, y1 - half_h
    if ax0 >= ax1 or ay0 >= ay1:
        return False
    hits = np.ones((ay1 - ay0, ax1 - ax0), dtype=bool)
    for dx, dy in shape_offsets(k, m, 0, 0):
        hits &= active[ay0 + dy:ay1 + dy, ax0 + dx:ax1 + dx]
        if not hits.any():
            return False
    return True


@dataclass
class GrowthCheck:
    """Outcome of one deterministic-growth verification."""

    passed: bool
    skipped: bool = False
    reason: str = ""
    params: dict | None = None
    rounds: int = 0

    def __bool__(self):
        return self.passed or self.skipped


def _skip(reason, **params):
    return GrowthCheck(passed=False, skipped=True, reason=reason, params=params)


def verify_shape_growth(k: int, m: int, a: int, b: int, r: int,
                        n: int | None = None) -> GrowthCheck:
    """Check that an active shape plus an all-good environment grows.

    Builds the state: active shape(a, b) at the torus center, union the
    goodness-forcing column pattern; verifies that every vertex of
    shape(a+1, b) is good or active initially; runs the majority-r process
    on the reach-k lattice; passes iff shape(a+1, b) ends fully active.
    Parameter combinations outside the guarantee are skipped, not failed.
    """
    if not (1 <= m < k):
        return _skip(f"need 1 <= m < k (m={m}, k={k})", k=k, m=m, a=a, b=b, r=r)
    if a < 0 or b < 0:
        return _skip(f"need a, b >= 0 (a={a}, b={b})", k=k, m=m, a=a, b=b, r=r)
    if r > math.ceil(k / m):
        return _skip(f"need r <= ceil(k/m) = {math.ceil(k / m)} (r={r})",
                     k=k, m=m, a=a, b=b, r=r)
    if goodness_quota(k, m) > k:
        return _skip("goodness quota exceeds segment length", k=k, m=m, a=a, b=b, r=r)
    n_min = 4 * (b + (m + a + 2) * k)
    if n is None:
        n = n_min
    elif n < n_min:
        return _skip(f"torus too small: n={n} < {n_min}", k=k, m=m, a=a, b=b, r=r)
    params = dict(k=k, m=m, a=a, b=b, r=r, n=n)

    center = (n // 2, n // 2)
    active = goodness_pattern(n, k, m)
    flat = active.reshape(-1)
    flat[shape_points(n, k, m, a, b, center)] = True
    target = shape_points(n, k, m, a + 1, b, center)

    good = good_vertices(active, k, m).reshape(-1)
    if not (good[target] | flat[target]).all():
        return GrowthCheck(passed=False, reason="initial state does not make "
                           "the target shape good-or-active", params=params)

    g = TorusGraph.reach(n, k)
    final = run_to_fixpoint(g, Rule("majority", r), flat)
    ok = bool(final.active[target].all())
    return GrowthCheck(passed=ok, params=params, rounds=final.rounds,
                       reason="" if ok else "target shape not fully active")


def shape_growth_grid(k_max: int = 10, a_max: int = 3, b_max: int = 3):
    """All in-guarantee (k, m, a, b) combinations with r = ceil(k/m).

    Yields (params, GrowthCheck) for every k <= k_max, 2 <= m < k with
    2*ceil(k/m) <= k, and a, b <= the given bounds.
    """
    for k in range(2, k_max + 1):
        for m in range(2, k):
            if goodness_quota(k, m) > k:
                continue
            r = math.ceil(k / m)
            for a in range(a_max + 1):
                for b in range(b_max + 1):
                    yield dict(k=k, m=m, a=a, b=b, r=r), \
                        verify_shape_growth(k, m, a, b, r)


def _l1_connected_cells(cells: list[tuple[int, int]], nh: int) -> bool:
    cellset = set(cells)
    if not cellset:
        return False
    seen = {cells[0]}
    stack = [cells[0]]
    while stack:
        ci, cj = stack.pop()
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nxt = ((ci + di) % nh, (cj + dj) % nh)
            if nxt in cellset and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen == cellset


@dataclass
class CellScenario:
    """A connected set of all-good cells with (optionally) a planted seed."""

    n: int
    t: int
    k: int
    m: int
    r: int
    cells: list
    seed_cell: tuple[int, int] | None = None


def verify_cell_spread(sc: CellScenario) -> GrowthCheck:
    """Check that a connected set of good cells with a seed becomes active.

    The initial state is the goodness-forcing pattern (making every cell
    good) plus one active shape translate centered in the seed cell.  Runs
    the majority-r process and passes iff every vertex of every listed cell
    is finally active.  Scenarios violating the preconditions are skipped.
    """
    params = dict(n=sc.n, t=sc.t, k=sc.k, m=sc.m, r=sc.r,
                  cells=list(map(tuple, sc.cells)), seed_cell=sc.seed_cell)
    if not (1 <= sc.m < sc.k):
        return _skip("need 1 <= m < k", **params)
    if sc.r > math.ceil(sc.k / sc.m):
        return _skip("need r <= ceil(k/m)", **params)
    if goodness_quota(sc.k, sc.m) > sc.k:
        return _skip("goodness quota exceeds segment length", **params)
    if not 1 <= sc.t <= sc.n:
        return _skip("need 1 <= t <= n", **params)
    tess = tessellate(sc.n, sc.t)
    cells = [tuple(c) for c in sc.cells]
    if not _l1_connected_cells(cells, tess.cells_per_axis):
        return _skip("cell set is not l1-connected", **params)
    if sc.seed_cell is None:
        return _skip("preconditions unmet: no seed cell", **params)
    if tuple(sc.seed_cell) not in cells:
        return _skip("seed cell not in the cell set", **params)

    active = goodness_pattern(sc.n, sc.k, sc.m)
    x0, x1, y0, y1 = tess.cell_bounds(*sc.seed_cell)
    center = ((x0 + x1) // 2, (y0 + y1) // 2)
    xs = shape_rows(sc.k, sc.m, 0, 0)
    if (x1 - x0) < 2 * int(xs[0]) + 1 or (y1 - y0) < 2 * (sc.m + 1) + 1:
        return _skip("seed cell too small to contain the shape", **params)
    flat = active.reshape(-1)
    flat[shape_points(sc.n, sc.k, sc.m, 0, 0, center)] = True
    if not is_seed_cell(tess, tuple(sc.seed_cell), active, sc.k, sc.m):
        return GrowthCheck(passed=False, reason="planted seed not detected",
                           params=params)

    g = TorusGraph.reach(sc.n, sc.k)
    final = run_to_fixpoint(g, Rule("majority", sc.r), flat)
    grid = final.active.reshape(sc.n, sc.n)
    for c in cells:
        cx0, cx1, cy0, cy1 = tess.cell_bounds(*c)
        if not grid[cy0:cy1, cx0:cx1].all():
            return GrowthCheck(passed=False, params=params, rounds=final.rounds,
                               reason=f"cell {c} not fully active")
    return GrowthCheck(passed=True, params=params, rounds=final.rounds)
