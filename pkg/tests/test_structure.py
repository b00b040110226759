from itertools import combinations

import numpy as np
import pytest

from hyperconn.model import Hypergraph, ValidationError
from hyperconn.sampling import two_section
from hyperconn.structure import (
    component_count,
    component_sizes,
    is_connected,
    isolated_nodes,
    oracle_is_connected,
    summarize,
)
from oracles import all_subsets, bfs_connected, partition_connected


def H(n, *edges):
    return Hypergraph.from_edges(n, edges)


def random_hypergraph(gen, n, max_edges=6, max_size=None):
    max_size = n if max_size is None else max_size
    m = int(gen.integers(0, max_edges + 1))
    edges = []
    for _ in range(m):
        x = int(gen.integers(0, max_size + 1))
        edges.append((gen.permutation(n)[:x] + 1).tolist())
    return Hypergraph.from_edges(n, edges)


def test_connected_examples():
    assert is_connected(H(5, [1, 2, 3, 4, 5]))
    assert not is_connected(H(3, [1, 2]))
    assert is_connected(H(4, [1, 2], [2, 3], [3, 4]))
    assert partition_connected(4, [[1, 2], [2, 3], [3, 4]])


def test_single_node_is_connected():
    assert is_connected(H(1))
    assert oracle_is_connected(H(1))
    assert component_count(H(1)) == 1


def test_oracle_conventions():
    assert not oracle_is_connected(H(2))
    with pytest.raises(ValidationError):
        oracle_is_connected(H(21))


def test_isolated_examples():
    assert isolated_nodes(H(2, [1])) == {1, 2}
    assert isolated_nodes(H(4, [1, 2, 3, 4])) == frozenset()
    assert isolated_nodes(H(5, [1, 2], [3])) == {3, 4, 5}


def test_component_examples():
    assert component_count(H(4, [1, 2, 3, 4])) == 1
    assert component_sizes(H(4, [1, 2])) == [2, 1, 1]
    assert component_sizes(H(6, [1, 2, 3], [4, 5])) == [3, 2, 1]


def test_summary_matches_individual_ops():
    gen = np.random.default_rng(0)
    for _ in range(500):
        h = random_hypergraph(gen, int(gen.integers(1, 15)))
        s = summarize(h)
        assert s.connected == is_connected(h)
        assert s.component_count == len(component_sizes(h))
        assert s.isolated_count == len(isolated_nodes(h))
        assert sum(component_sizes(h)) == h.n


def test_union_find_matches_oracle_exhaustively():
    # every list of at most two edges of size <= 3, n <= 8
    for n in range(1, 9):
        edges = [s for x in range(0, min(3, n) + 1) for s in all_subsets(n, x)]
        pairs = [()] + [(e,) for e in edges] + list(combinations(edges, 2))
        for es in pairs:
            h = Hypergraph.from_edges(n, es)
            assert is_connected(h) == oracle_is_connected(h), (n, es)


def test_union_find_matches_oracle_random():
    gen = np.random.default_rng(1)
    for _ in range(10_000):
        h = random_hypergraph(gen, int(gen.integers(1, 13)), max_edges=8)
        assert is_connected(h) == oracle_is_connected(h)


def test_oracle_agrees_with_literal_set_definition():
    gen = np.random.default_rng(2)
    for _ in range(300):
        h = random_hypergraph(gen, int(gen.integers(1, 7)))
        assert oracle_is_connected(h) == partition_connected(h.n, h.edges)


def test_structural_invariants_random():
    gen = np.random.default_rng(3)
    for _ in range(10_000):
        h = random_hypergraph(gen, int(gen.integers(1, 30)), max_edges=12, max_size=6)
        connected = is_connected(h)
        if isolated_nodes(h) and h.n >= 2:
            assert not connected
        assert connected == bfs_connected(h.n, two_section(h))
        assert (component_count(h) == 1) == connected


def test_size_one_and_empty_edges_join_nothing():
    h = H(3, [1], [], [2], [3])
    assert component_sizes(h) == [1, 1, 1]
    assert isolated_nodes(h) == {1, 2, 3}
