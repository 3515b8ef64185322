import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from majperc.lattice import (ExplicitGraph, TorusGraph, tessellate,
                             torus_distance, vertex_index, vertex_xy)


def test_reach_neighbors_example():
    g = TorusGraph.reach(10, 2)
    got = set(g.neighbors((0, 0)))
    want = {(i % 10, 1) for i in range(-2, 3)} | {(i % 10, 9) for i in range(-2, 3)}
    assert got == want
    assert len(got) == 10


def test_grid_neighbors_example():
    g = TorusGraph.grid(5)
    assert set(g.neighbors((0, 0))) == {(1, 0), (4, 0), (0, 1), (0, 4)}


def test_king_neighbors_count():
    g = TorusGraph.king(5)
    assert len(set(g.neighbors((2, 2)))) == 8


def test_wrapped_neighborhood_rejected():
    with pytest.raises(ValueError, match="wraps"):
        TorusGraph.reach(5, 3)
    TorusGraph.reach(7, 3)  # 2k+1 == n is allowed


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_reach_regular_and_symmetric(data):
    n = data.draw(st.integers(5, 24))
    k = data.draw(st.integers(1, (n - 1) // 2))
    g = TorusGraph.reach(n, k)
    v = data.draw(st.integers(0, n * n - 1))
    nbrs = g.neighbor_indices(v)
    assert len(set(nbrs.tolist())) == 4 * k + 2
    assert v not in nbrs
    for w in nbrs[:5]:
        assert v in g.neighbor_indices(int(w))


def test_vertex_index_roundtrip():
    n = 13
    for v in range(n * n):
        x, y = vertex_xy(v, n)
        assert vertex_index(x, y, n) == v


@pytest.mark.parametrize("u,v,metric,n,want", [
    ((0, 0), (3, 4), "l1", 10, 7),
    ((0, 0), (9, 0), "l1", 10, 1),
    ((0, 0), (3, 4), "linf", 10, 4),
    ((2, 2), (2, 2), "l1", 5, 0),
])
def test_distance_examples(u, v, metric, n, want):
    assert torus_distance(u, v, metric=metric, n=n) == want


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_distance_metric_axioms(data):
    n = data.draw(st.integers(3, 30))
    pts = [(data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1)))
           for _ in range(3)]
    for metric in ("l1", "linf"):
        a, b, c = pts
        dab = torus_distance(a, b, metric=metric, n=n)
        assert dab == torus_distance(b, a, metric=metric, n=n)
        assert (dab == 0) == (a == b)
        assert dab <= torus_distance(a, c, metric=metric, n=n) \
            + torus_distance(c, b, metric=metric, n=n)


def _bfs_distance(g, s, t):
    from collections import deque
    dist = {s: 0}
    q = deque([s])
    while q:
        v = q.popleft()
        if v == t:
            return dist[v]
        for w in g.neighbor_indices(v):
            w = int(w)
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    raise AssertionError("disconnected")


@pytest.mark.parametrize("metric,family", [("l1", "grid"), ("linf", "king")])
def test_distance_is_graph_distance(metric, family):
    n = 7
    g = TorusGraph.grid(n) if family == "grid" else TorusGraph.king(n)
    rng = np.random.default_rng(5)
    for _ in range(15):
        u, v = rng.integers(0, n * n, 2)
        want = _bfs_distance(g, int(u), int(v))
        got = torus_distance(vertex_xy(int(u), n), vertex_xy(int(v), n),
                             metric=metric, n=n)
        assert got == want


# ---------------------------------------------------------------- tessellation

def test_tessellate_example():
    t = tessellate(10, 3)
    assert t.cells_per_axis == 3
    assert t.boundaries.tolist() == [0, 3, 6, 10]
    x0, x1, y0, y1 = t.cell_bounds(2, 2)
    assert (x0, x1, y0, y1) == (6, 10, 6, 10)


def test_tessellate_exact_division():
    t = tessellate(9, 3)
    for i in range(3):
        for j in range(3):
            assert t.cell_side_lengths(i, j) == (3, 3)


def test_tessellate_side_lengths_in_range():
    for n, tt in [(10, 3), (17, 4), (23, 7), (64, 64)]:
        tess = tessellate(n, tt)
        for i in range(tess.cells_per_axis):
            for j in range(tess.cells_per_axis):
                w, h = tess.cell_side_lengths(i, j)
                assert tt <= w < 2 * tt and tt <= h < 2 * tt


def test_tessellate_rejects_bad_t():
    with pytest.raises(ValueError):
        tessellate(10, 11)
    with pytest.raises(ValueError):
        tessellate(10, 0)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_cells_partition_torus(data):
    n = data.draw(st.integers(4, 40))
    t = data.draw(st.integers(1, n))
    tess = tessellate(n, t)
    nh = tess.cells_per_axis
    assert nh == n // t
    cover = np.zeros((n, n), dtype=int)
    for i in range(nh):
        for j in range(nh):
            x0, x1, y0, y1 = tess.cell_bounds(i, j)
            cover[y0:y1, x0:x1] += 1
            for x in range(x0, x1):
                for y in range(y0, y1):
                    if x % 7 == 0 and y % 5 == 0:   # spot checks
                        assert tess.cell_of(x, y) == (i, j)
    assert (cover == 1).all()


def test_cell_of_matches_vertex_cell_ids():
    tess = tessellate(23, 5)
    ids = tess.vertex_cell_ids()
    nh = tess.cells_per_axis
    for v in range(0, 23 * 23, 17):
        x, y = vertex_xy(v, 23)
        ci, cj = tess.cell_of(x, y)
        assert ids[v] == ci * nh + cj


def test_adjacent_vertices_in_chebyshev_adjacent_cells():
    # reach-adjacent vertices sit in cells at Chebyshev distance <= 1
    # provided cells are wider than the stencil: 2k+2 <= t.
    n, k, t = 36, 2, 6
    g = TorusGraph.reach(n, k)
    tess = tessellate(n, t)
    nh = tess.cells_per_axis
    rng = np.random.default_rng(0)
    for v in rng.integers(0, n * n, 60):
        cv = tess.cell_of(*vertex_xy(int(v), n))
        for w in g.neighbor_indices(int(v)):
            cw = tess.cell_of(*vertex_xy(int(w), n))
            assert torus_distance(cv, cw, metric="linf", n=nh) <= 1


# ---------------------------------------------------------------- explicit

def test_explicit_graph_cycle():
    g = ExplicitGraph.cycle(6)
    assert g.is_regular and g.degree == 2
    assert set(g.neighbor_indices(0).tolist()) == {1, 5}


def test_explicit_graph_rejects_loops():
    with pytest.raises(ValueError, match="loop"):
        ExplicitGraph(3, [(0, 0)])


def test_explicit_graph_symmetry_and_degrees():
    g = ExplicitGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    assert not g.is_regular
    assert g.degrees().tolist() == [3, 2, 3, 2]
    for v in range(4):
        for w in g.neighbor_indices(v):
            assert v in g.neighbor_indices(int(w))
