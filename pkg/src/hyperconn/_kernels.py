"""Numba kernels for the two inner loops: subset sampling and union-find."""
import numpy as np
from numba import njit


@njit(cache=True)
def fill_subsets(n, sizes, draws, perm, offsets, out):
    """Write one uniform subset per entry of ``sizes`` into ``out``.

    Partial Fisher-Yates over ``perm`` (a permutation of 1..n, mutated in
    place): ``draws`` holds, per edge, the swap targets for positions
    0..e-1 with e = min(x, n - x).  When x > n - x the complement of the
    e picked nodes is emitted instead.  Output segments are sorted.
    """
    mark = np.zeros(n + 1, dtype=np.bool_)
    p = 0
    for k in range(sizes.shape[0]):
        x = sizes[k]
        e = min(x, n - x)
        for i in range(e):
            j = draws[p]
            p += 1
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
        start = offsets[k]
        if x <= n - x:
            seg = np.sort(perm[:e])
            for i in range(e):
                out[start + i] = seg[i]
        else:
            for i in range(e):
                mark[perm[i]] = True
            q = start
            for v in range(1, n + 1):
                if not mark[v]:
                    out[q] = v
                    q += 1
            for i in range(e):
                mark[perm[i]] = False


@njit(cache=True)
def _find(parent, a):
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


@njit(cache=True)
def union_find(n, offsets, nodes):
    """Disjoint-set forest over nodes 1..n (index 0 unused).

    Path compression plus union by size, one pass over the edges.
    Returns (root per node, component size per root, covered-by-size>=2 flag).
    """
    parent = np.arange(n + 1)
    size = np.ones(n + 1, dtype=np.int64)
    covered = np.zeros(n + 1, dtype=np.bool_)
    for k in range(offsets.shape[0] - 1):
        a, b = offsets[k], offsets[k + 1]
        if b - a < 2:
            continue
        first = nodes[a]
        covered[first] = True
        for i in range(a + 1, b):
            v = nodes[i]
            covered[v] = True
            ra = _find(parent, first)
            rb = _find(parent, v)
            if ra == rb:
                continue
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
    roots = np.empty(n + 1, dtype=np.int64)
    for v in range(1, n + 1):
        roots[v] = _find(parent, v)
    return roots, size, covered


@njit(cache=True)
def summarize(n, offsets, nodes):
    """(component count, isolated-node count) in one pass."""
    roots, _, covered = union_find(n, offsets, nodes)
    components = 0
    isolated = 0
    for v in range(1, n + 1):
        if roots[v] == v:
            components += 1
        if not covered[v]:
            isolated += 1
    return components, isolated
