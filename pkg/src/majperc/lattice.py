"""Torus geometry: stencil lattice graphs, explicit graphs, metrics, tessellation.

Vertices of the n x n torus are indexed ``v = y*n + x`` with coordinates
reduced modulo n.  Coordinate pairs are a view; the dense index is the
storage format used by the process engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "vertex_index",
    "vertex_xy",
    "torus_distance",
    "TorusGraph",
    "ExplicitGraph",
    "Tessellation",
    "tessellate",
]


def vertex_index(x: int, y: int, n: int) -> int:
    """Dense index of torus point (x, y), coordinates reduced mod n."""
    return (y % n) * n + (x % n)


def vertex_xy(v: int, n: int) -> tuple[int, int]:
    """Inverse of vertex_index."""
    return (v % n, v // n)


def _circ(delta: np.ndarray | int, n: int):
    """Circular distance of a coordinate difference."""
    d = np.mod(delta, n)
    return np.minimum(d, n - d)


def torus_distance(u, v, n: int, metric: str = "l1"):
    """Graph distance between torus points in the 4-neighbour ("l1") or
    8-neighbour ("linf") lattice.

    u, v are (x, y) pairs (arrays broadcast elementwise).
    """
    ux, uy = u
    vx, vy = v
    dx = _circ(np.asarray(vx) - np.asarray(ux), n)
    dy = _circ(np.asarray(vy) - np.asarray(uy), n)
    if metric == "l1":
        return dx + dy
    if metric == "linf":
        return np.maximum(dx, dy)
    raise ValueError(f"unknown metric {metric!r}")


def _reach_offsets(k: int) -> np.ndarray:
    """Offsets {-k..k} x {-1, +1}: the two-row horizontal-reach stencil."""
    out = [(dx, dy) for dy in (-1, 1) for dx in range(-k, k + 1)]
    return np.array(out, dtype=np.int64)


_GRID_OFFSETS = np.array([(1, 0), (-1, 0), (0, 1), (0, -1)], dtype=np.int64)
_KING_OFFSETS = np.array(
    [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0)],
    dtype=np.int64,
)


class TorusGraph:
    """Regular graph on the n x n torus defined by an offset stencil, plus an
    optional bundle of perfect matchings.

    Families:
      * ``reach``: (x, y) ~ (x+dx, y+dy) for dx in {-k..k}, dy in {-1,+1};
        (4k+2)-regular.  Requires 2k+1 <= n so neighbourhoods do not wrap.
      * ``grid``: the 4-regular square lattice.
      * ``king``: the square lattice with diagonals, 8-regular.

    ``partners`` is an optional (r, n*n) int array of matching partner
    indices; each row must be a fixed-point-free involution.  Neighbour
    iteration then yields the stencil neighbours plus the r partners, so the
    graph is (stencil_degree + r)-regular.  Instances are immutable and safe
    to share across worker threads.
    """

    def __init__(self, n: int, family: str = "reach", k: int | None = None,
                 partners: np.ndarray | None = None):
        if family == "reach":
            if k is None or k < 1:
                raise ValueError("reach family requires k >= 1")
            if 2 * k + 1 > n:
                raise ValueError(
                    f"2k+1 = {2 * k + 1} > n = {n}: neighbourhood wraps around the torus"
                )
            offsets = _reach_offsets(k)
        elif family == "grid":
            if n < 3:
                raise ValueError("grid family requires n >= 3")
            k = None
            offsets = _GRID_OFFSETS
        elif family == "king":
            if n < 3:
                raise ValueError("king family requires n >= 3")
            k = None
            offsets = _KING_OFFSETS
        else:
            raise ValueError(f"unknown family {family!r}")
        self.n = int(n)
        self.family = family
        self.k = k
        self.offsets = offsets
        self.offsets.setflags(write=False)
        if partners is None:
            partners = np.empty((0, n * n), dtype=np.int64)
        else:
            partners = np.ascontiguousarray(partners, dtype=np.int64)
            if partners.shape != (partners.shape[0], n * n):
                raise ValueError("partners must have shape (r, n*n)")
        self.partners = partners
        self.partners.setflags(write=False)

    # -- constructors -------------------------------------------------
    @classmethod
    def reach(cls, n: int, k: int) -> "TorusGraph":
        return cls(n, "reach", k=k)

    @classmethod
    def grid(cls, n: int) -> "TorusGraph":
        return cls(n, "grid")

    @classmethod
    def king(cls, n: int) -> "TorusGraph":
        return cls(n, "king")

    def with_partners(self, partners: np.ndarray) -> "TorusGraph":
        return TorusGraph(self.n, self.family, k=self.k, partners=partners)

    # -- protocol used by the engine ----------------------------------
    @property
    def n_vertices(self) -> int:
        return self.n * self.n

    @property
    def num_matchings(self) -> int:
        return self.partners.shape[0]

    @property
    def degree(self) -> int:
        return len(self.offsets) + self.partners.shape[0]

    @property
    def is_regular(self) -> bool:
        return True

    def degrees(self) -> np.ndarray:
        return np.full(self.n_vertices, self.degree, dtype=np.int64)

    def neighbors(self, v) -> list[tuple[int, int]]:
        """Neighbour coordinate pairs of v (an index or an (x, y) pair)."""
        n = self.n
        if isinstance(v, (int, np.integer)):
            x, y = vertex_xy(int(v), n)
        else:
            x, y = int(v[0]) % n, int(v[1]) % n
        out = [((x + int(dx)) % n, (y + int(dy)) % n) for dx, dy in self.offsets]
        for j in range(self.partners.shape[0]):
            out.append(vertex_xy(int(self.partners[j, y * n + x]), n))
        return out

    def neighbor_indices(self, v: int) -> np.ndarray:
        n = self.n
        return np.array([vertex_index(x, y, n) for x, y in self.neighbors(v)],
                        dtype=np.int64)

    def __repr__(self):
        tag = f"reach k={self.k}" if self.family == "reach" else self.family
        r = self.partners.shape[0]
        extra = f" + {r} matchings" if r else ""
        return f"TorusGraph(n={self.n}, {tag}{extra}, degree={self.degree})"


class ExplicitGraph:
    """Small test graph stored as CSR adjacency.  Symmetric and loop-free."""

    def __init__(self, n_vertices: int, edges):
        edges = [(int(u), int(v)) for u, v in edges]
        adj: list[set[int]] = [set() for _ in range(n_vertices)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u].add(v)
            adj[v].add(u)
        degs = np.array([len(a) for a in adj], dtype=np.int64)
        self.n_vertices = int(n_vertices)
        self.indptr = np.concatenate([[0], np.cumsum(degs)]).astype(np.int64)
        self.indices = np.fromiter(
            (w for a in adj for w in sorted(a)), dtype=np.int64, count=int(degs.sum())
        )
        self._degrees = degs

    @classmethod
    def cycle(cls, n: int) -> "ExplicitGraph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def from_networkx(cls, g) -> "ExplicitGraph":
        nodes = sorted(g.nodes())
        idx = {u: i for i, u in enumerate(nodes)}
        return cls(len(nodes), [(idx[u], idx[v]) for u, v in g.edges()])

    @property
    def is_regular(self) -> bool:
        return bool(self._degrees.size == 0 or (self._degrees == self._degrees[0]).all())

    @property
    def degree(self) -> int:
        if not self.is_regular:
            raise ValueError("graph is not regular")
        return int(self._degrees[0]) if self._degrees.size else 0

    def degrees(self) -> np.ndarray:
        return self._degrees

    def neighbor_indices(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]


@dataclass(frozen=True)
class Tessellation:
    """Partition of the torus into ``cells_per_axis**2`` rectangular cells.

    Boundaries are ``a[i] = i*t`` with the last one bumped to n, so every
    cell side length lies in [t, 2t); the last row/column absorbs the
    remainder when t does not divide n.  Cell (i, j) covers
    x in [a[i], a[i+1]) and y in [a[j], a[j+1]).
    """

    n: int
    t: int
    cells_per_axis: int
    boundaries: np.ndarray = field(repr=False)

    def cell_of(self, x: int, y: int) -> tuple[int, int]:
        nh = self.cells_per_axis
        return (min((x % self.n) // self.t, nh - 1),
                min((y % self.n) // self.t, nh - 1))

    def cell_bounds(self, i: int, j: int) -> tuple[int, int, int, int]:
        """(x0, x1, y0, y1), half open."""
        a = self.boundaries
        return int(a[i]), int(a[i + 1]), int(a[j]), int(a[j + 1])

    def cell_side_lengths(self, i: int, j: int) -> tuple[int, int]:
        x0, x1, y0, y1 = self.cell_bounds(i, j)
        return x1 - x0, y1 - y0

    def vertex_cell_ids(self) -> np.ndarray:
        """(n*n,) array mapping vertex index -> cell id ci*cells_per_axis+cj."""
        nh = self.cells_per_axis
        ax = np.minimum(np.arange(self.n) // self.t, nh - 1)
        return (ax[None, :] * nh + ax[:, None]).reshape(-1)

    def cell_vertex_mask(self, i: int, j: int) -> np.ndarray:
        """Boolean (n, n) grid (indexed [y][x]) of the cell's vertices."""
        x0, x1, y0, y1 = self.cell_bounds(i, j)
        mask = np.zeros((self.n, self.n), dtype=bool)
        mask[y0:y1, x0:x1] = True
        return mask


def tessellate(n: int, t: int) -> Tessellation:
    """Build the t-tessellation of the n x n torus."""
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    nh = n // t
    bounds = np.array([i * t for i in range(nh)] + [n], dtype=np.int64)
    bounds.setflags(write=False)
    return Tessellation(n=n, t=t, cells_per_axis=nh, boundaries=bounds)
