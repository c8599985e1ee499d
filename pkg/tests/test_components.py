from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulab.components import (component_sums, component_sums_bruteforce,
                              component_sums_treewidth)
from mulab.errors import ResourceError


def adjacency(n, edges):
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


graphs = st.integers(1, 11).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                       .filter(lambda e: e[0] != e[1]), max_size=3 * n)
    .map(lambda es: adjacency(n, es)))


def test_path_graph_counts():
    # P3: subsets of size 2 are {01, 12} connected, {02} two components
    assert component_sums_bruteforce(adjacency(3, [(0, 1), (1, 2)])) == [0, 3, 4, 1]


def test_edgeless_graph():
    n = 5
    from math import comb
    assert component_sums(adjacency(n, [])) == [k * comb(n, k) for k in range(n + 1)]


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_treewidth_dp_matches_bruteforce(adj):
    assert component_sums_treewidth(adj, bag_limit=12) == component_sums_bruteforce(adj)


def test_large_sparse_graph_uses_dp():
    rng = random.Random(5)
    n = 30
    edges = [(i, i + 1) for i in range(n - 1)] + [(rng.randrange(n), rng.randrange(n)) for _ in range(5)]
    edges = [e for e in edges if e[0] != e[1]]
    adj = adjacency(n, edges)
    sums = component_sums(adj)
    assert sums[0] == 0 and sums[n] == 1
    assert sums[1] == n


def test_bag_limit_is_enforced():
    n = 14
    complete = adjacency(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    with pytest.raises(ResourceError):
        component_sums(complete, bag_limit=5)
