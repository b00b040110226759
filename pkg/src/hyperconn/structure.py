"""Connectivity, isolated nodes and components of a hypergraph."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import Hypergraph, ValidationError

ORACLE_MAX_N = 20


@dataclass(frozen=True)
class StructureSummary:
    connected: bool
    component_count: int
    isolated_count: int


def summarize(h: Hypergraph) -> StructureSummary:
    components, isolated = _kernels.summarize(h.n, h.offsets, h.nodes)
    return StructureSummary(components == 1, int(components), int(isolated))


def is_connected(h: Hypergraph) -> bool:
    """Union the nodes of every hyperedge; connected iff a single class remains.

    Empty and singleton edges join nothing.  ``n = 1`` is connected.
    """
    return component_count(h) == 1


def component_sizes(h: Hypergraph) -> list[int]:
    """Component sizes in decreasing order; uncovered nodes count as size 1."""
    roots, _, _ = _kernels.union_find(h.n, h.offsets, h.nodes)
    return sorted(Counter(roots[1:].tolist()).values(), reverse=True)


def component_count(h: Hypergraph) -> int:
    return int(_kernels.summarize(h.n, h.offsets, h.nodes)[0])


def isolated_nodes(h: Hypergraph) -> frozenset[int]:
    """Nodes in no hyperedge of size at least two."""
    covered = np.zeros(h.n + 1, dtype=bool)
    sizes = h.edge_sizes
    keep = np.repeat(sizes >= 2, sizes)
    covered[h.nodes[keep]] = True
    return frozenset((np.flatnonzero(~covered[1:]) + 1).tolist())


def oracle_is_connected(h: Hypergraph) -> bool:
    """Brute force over all bipartitions ``(S, complement)`` with node 1 in S.

    Connected iff every such bipartition is crossed by some edge.  Exponential
    in ``n``; refuses ``n > ORACLE_MAX_N``.
    """
    n = h.n
    if n > ORACLE_MAX_N:
        raise ValidationError(f"oracle limited to n ≤ {ORACLE_MAX_N}, got n = {n}")
    full = (1 << n) - 1
    # S = {1} ∪ (bits of mask shifted up); the all-ones mask would make S = V
    masks = (np.arange((1 << (n - 1)) - 1, dtype=np.int64) << 1) | 1
    crossed = np.zeros(masks.shape, dtype=bool)
    for e in set(h.edges):
        bits = sum(1 << (v - 1) for v in e)
        crossed |= ((masks & bits) != 0) & ((~masks & full & bits) != 0)
    return bool(crossed.all())
