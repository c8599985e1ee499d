"""Component counts of all induced subgraphs, summed by subset size.

``component_sums(adj)[k]`` is Σ over k-subsets W of the number of connected
components of the induced subgraph G[W].  Small graphs are handled by
direct subset enumeration.  Larger ones use a connectivity dynamic program
over a tree decomposition: a state is a partition of the chosen bag
vertices into blocks that are already connected below, and a component is
counted when its last bag vertex is forgotten.  The cost is exponential
only in the bag size, which stays small for the link graphs of stacked
manifolds.
"""
from __future__ import annotations

from typing import Sequence

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .errors import ResourceError

BRUTE_FORCE_LIMIT = 12
DEFAULT_BAG_LIMIT = 10


def _component_count(w: int, adj: Sequence[int]) -> int:
    c = 0
    while w:
        comp = frontier = w & -w
        while frontier:
            nb = 0
            f = frontier
            while f:
                b = f & -f
                f ^= b
                nb |= adj[b.bit_length() - 1]
            frontier = nb & w & ~comp
            comp |= frontier
        w &= ~comp
        c += 1
    return c


def component_sums_bruteforce(adj: Sequence[int]) -> list[int]:
    n = len(adj)
    sums = [0] * (n + 1)
    for w in range(1, 1 << n):
        sums[w.bit_count()] += _component_count(w, adj)
    return sums


def _add(table: dict, key, cnt: list[int], comp: list[int]) -> None:
    cur = table.get(key)
    if cur is None:
        table[key] = (list(cnt), list(comp))
    else:
        c0, k0 = cur
        for i, v in enumerate(cnt):
            c0[i] += v
        for i, v in enumerate(comp):
            k0[i] += v


def _shift(poly: list[int], by: int, n: int) -> list[int]:
    if by >= 0:
        return ([0] * by + poly)[: n + 1]
    return poly[-by:] + [0] * (-by)


def _conv(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def _introduce(table: dict, u: int, adj: Sequence[int], n: int) -> dict:
    bit = 1 << u
    out: dict = {}
    for blocks, (cnt, comp) in table.items():
        _add(out, blocks, cnt, comp)
        merged = bit
        rest = []
        for b in blocks:
            if adj[u] & b:
                merged |= b
            else:
                rest.append(b)
        key = tuple(sorted(rest + [merged]))
        _add(out, key, _shift(cnt, 1, n), _shift(comp, 1, n))
    return out


def _forget(table: dict, u: int) -> dict:
    bit = 1 << u
    out: dict = {}
    for blocks, (cnt, comp) in table.items():
        new = []
        closed = False
        for b in blocks:
            if b & bit:
                b &= ~bit
                if not b:
                    closed = True
                    continue
            new.append(b)
        if closed:
            comp = [x + y for x, y in zip(comp, cnt)]
        _add(out, tuple(sorted(new)), cnt, comp)
    return out


def _join_blocks(p1: tuple, p2: tuple) -> tuple:
    blocks = list(p1)
    for b in p2:
        hit = [x for x in blocks if x & b]
        merged = b
        for x in hit:
            merged |= x
            blocks.remove(x)
        blocks.append(merged)
    return tuple(sorted(blocks))


def _join(t1: dict, t2: dict, n: int) -> dict:
    by_set: dict[int, list] = {}
    for blocks, val in t2.items():
        s = 0
        for b in blocks:
            s |= b
        by_set.setdefault(s, []).append((blocks, val))
    out: dict = {}
    for blocks, (c1, k1) in t1.items():
        s = 0
        for b in blocks:
            s |= b
        size = s.bit_count()
        for blocks2, (c2, k2) in by_set.get(s, ()):
            key = _join_blocks(blocks, blocks2)
            cnt = _shift(_conv(c1, c2, n + size), -size, n + size)[: n + 1]
            comp = [x + y for x, y in zip(_conv(k1, c2, n + size), _conv(c1, k2, n + size))]
            comp = _shift(comp, -size, n + size)[: n + 1]
            _add(out, key, cnt, comp)
    return out


def component_sums_treewidth(adj: Sequence[int], bag_limit: int = DEFAULT_BAG_LIMIT) -> list[int]:
    n = len(adj)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for u in range(n):
        a = adj[u] >> (u + 1)
        v = u + 1
        while a:
            if a & 1:
                g.add_edge(u, v)
            a >>= 1
            v += 1
    _, tree = treewidth_min_fill_in(g)
    bags = sorted(tree.nodes, key=lambda b: sorted(b))
    covered = set().union(*bags) if bags else set()
    missing = [v for v in range(n) if v not in covered]
    if missing:
        raise AssertionError("tree decomposition misses vertices")
    width = max(len(b) for b in bags)
    if width > bag_limit:
        raise ResourceError(f"tree decomposition bags of size {width} exceed limit {bag_limit}")
    root = bags[0]
    zero = [0] * (n + 1)
    one = [1] + [0] * n

    def empty_table():
        return {(): (list(one), list(zero))}

    # iterative post-order over the decomposition tree
    order = []
    parent = {root: None}
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in sorted(tree.neighbors(x), key=lambda b: sorted(b)):
            if y not in parent:
                parent[y] = x
                stack.append(y)
    tables: dict = {}
    for x in reversed(order):
        table = None
        for y in tree.neighbors(x):
            if parent.get(y) != x:
                continue
            t = tables.pop(y)
            for u in sorted(y - x):
                t = _forget(t, u)
            for u in sorted(x - y):
                t = _introduce(t, u, adj, n)
            table = t if table is None else _join(table, t, n)
        if table is None:
            table = empty_table()
            for u in sorted(x):
                table = _introduce(table, u, adj, n)
        tables[x] = table
    final = tables[root]
    for u in sorted(root):
        final = _forget(final, u)
    (cnt, comp), = final.values()
    return comp


def component_sums(adj: Sequence[int], bag_limit: int = DEFAULT_BAG_LIMIT) -> list[int]:
    """``sums[k]`` = Σ_{|W|=k} (number of components of G[W]); ``adj`` holds neighbour masks."""
    if len(adj) <= BRUTE_FORCE_LIMIT:
        return component_sums_bruteforce(adj)
    return component_sums_treewidth(adj, bag_limit)
