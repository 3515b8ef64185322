"""Numba kernels for the activation process and core peeling.

Two graph representations are supported: torus stencil graphs (offset list
plus optional matching-partner rows) and CSR adjacency for explicit test
graphs.  All kernels are nopython and release the GIL so trial workers can
run concurrently on threads.
"""

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def run_stencil(n, offsets, partners, active, threshold):
    """Run the activation process to its fixpoint on a stencil torus graph.

    Layered frontier queue with per-vertex active-neighbour counters: each
    newly activated vertex bumps its neighbours' counters, vertices crossing
    ``threshold`` join the next layer.  Layers coincide with synchronous
    rounds, so the returned round count is the synchronous one.  ``active``
    is modified in place.  O(V + E) total work.
    """
    N = n * n
    s = offsets.shape[0]
    r = partners.shape[0]
    counts = np.zeros(N, dtype=np.int32)
    for v in range(N):
        if active[v]:
            x = v % n
            y = v // n
            for t in range(s):
                w = ((y + offsets[t, 1]) % n) * n + ((x + offsets[t, 0]) % n)
                counts[w] += 1
            for j in range(r):
                counts[partners[j, v]] += 1
    frontier = np.empty(N, dtype=np.int64)
    nf = 0
    for v in range(N):
        if not active[v] and counts[v] >= threshold:
            frontier[nf] = v
            nf += 1
    buf = np.empty(N, dtype=np.int64)
    rounds = 0
    while nf > 0:
        rounds += 1
        for i in range(nf):
            active[frontier[i]] = True
        nn = 0
        for i in range(nf):
            v = frontier[i]
            x = v % n
            y = v // n
            for t in range(s):
                w = ((y + offsets[t, 1]) % n) * n + ((x + offsets[t, 0]) % n)
                counts[w] += 1
                if counts[w] == threshold and not active[w]:
                    buf[nn] = w
                    nn += 1
            for j in range(r):
                w = partners[j, v]
                counts[w] += 1
                if counts[w] == threshold and not active[w]:
                    buf[nn] = w
                    nn += 1
        frontier, buf = buf, frontier
        nf = nn
    return rounds


@njit(**_JIT)
def run_csr(indptr, indices, active, thresholds):
    """Same frontier algorithm on CSR adjacency with per-vertex thresholds."""
    N = active.shape[0]
    counts = np.zeros(N, dtype=np.int32)
    for v in range(N):
        if active[v]:
            for e in range(indptr[v], indptr[v + 1]):
                counts[indices[e]] += 1
    frontier = np.empty(N, dtype=np.int64)
    nf = 0
    for v in range(N):
        if not active[v] and counts[v] >= thresholds[v]:
            frontier[nf] = v
            nf += 1
    buf = np.empty(N, dtype=np.int64)
    rounds = 0
    while nf > 0:
        rounds += 1
        for i in range(nf):
            active[frontier[i]] = True
        nn = 0
        for i in range(nf):
            v = frontier[i]
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                counts[w] += 1
                if counts[w] == thresholds[w] and not active[w]:
                    buf[nn] = w
                    nn += 1
        frontier, buf = buf, frontier
        nf = nn
    return rounds


@njit(**_JIT)
def core_stencil(n, offsets, partners, member, core_threshold):
    """Peel ``member`` down to its core_threshold-core, in place.

    Repeatedly removes members with fewer than ``core_threshold`` member
    neighbours.  Removal order is by ascending vertex index within each
    peeling wave (the core itself is order-independent; the fixed order
    makes traces deterministic).
    """
    N = n * n
    s = offsets.shape[0]
    r = partners.shape[0]
    deg = np.zeros(N, dtype=np.int32)
    for v in range(N):
        if member[v]:
            x = v % n
            y = v // n
            d = 0
            for t in range(s):
                w = ((y + offsets[t, 1]) % n) * n + ((x + offsets[t, 0]) % n)
                if member[w]:
                    d += 1
            for j in range(r):
                if member[partners[j, v]]:
                    d += 1
            deg[v] = d
    stack = np.empty(N, dtype=np.int64)
    ns = 0
    for v in range(N):
        if member[v] and deg[v] < core_threshold:
            member[v] = False
            stack[ns] = v
            ns += 1
    while ns > 0:
        ns -= 1
        v = stack[ns]
        x = v % n
        y = v // n
        for t in range(s):
            w = ((y + offsets[t, 1]) % n) * n + ((x + offsets[t, 0]) % n)
            if member[w]:
                deg[w] -= 1
                if deg[w] < core_threshold:
                    member[w] = False
                    stack[ns] = w
                    ns += 1
        for j in range(r):
            w = partners[j, v]
            if member[w]:
                deg[w] -= 1
                if deg[w] < core_threshold:
                    member[w] = False
                    stack[ns] = w
                    ns += 1


@njit(**_JIT)
def core_csr(indptr, indices, member, core_threshold):
    """CSR version of core_stencil."""
    N = member.shape[0]
    deg = np.zeros(N, dtype=np.int32)
    for v in range(N):
        if member[v]:
            d = 0
            for e in range(indptr[v], indptr[v + 1]):
                if member[indices[e]]:
                    d += 1
            deg[v] = d
    stack = np.empty(N, dtype=np.int64)
    ns = 0
    for v in range(N):
        if member[v] and deg[v] < core_threshold:
            member[v] = False
            stack[ns] = v
            ns += 1
    while ns > 0:
        ns -= 1
        v = stack[ns]
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            if member[w]:
                deg[w] -= 1
                if deg[w] < core_threshold:
                    member[w] = False
                    stack[ns] = w
                    ns += 1
