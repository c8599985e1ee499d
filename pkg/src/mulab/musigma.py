"""μ-numbers, graded Betti numbers via Hochster sums, and σ̃-numbers.

For an ordering ``(v_1, ..., v_n)`` of the vertices, the ordering-dependent
number μ_i is the sum over k of b̃_{i-1} of the link pair of ``v_k`` inside
the restriction to ``{v_1, ..., v_k}``.  Averaging over all ``n!`` orderings
gives the exact μ_i, which :func:`mu_exact` computes without enumeration as
a sum of σ̃-numbers of vertex links.

Subset sums walk the Boolean lattice depth first, deciding one vertex per
level and filtering the surviving faces only on the "exclude" branch, so the
total filtering work is far below ``2^n`` times the face count.
"""
from __future__ import annotations

import hashlib
import itertools
import math
import os
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .complex import RelativePair, SimplicialComplex, bit_ids, iter_bits, popcount
from .components import DEFAULT_BAG_LIMIT, component_sums
from .errors import MalformedInputError, ResourceError
from .homology import QQ, BettiVector, Field, betti_of_levels, reduced_betti

DEFAULT_SUBSET_BUDGET = 22
DEFAULT_LINK_BUDGET = 16
DEFAULT_GRAPH_BAG_LIMIT = DEFAULT_BAG_LIMIT
ENUMERATION_LIMIT = 8


def _pair(p) -> RelativePair:
    return p if isinstance(p, RelativePair) else RelativePair(p)


def thread_count(threads: int | None = None) -> int:
    if threads is not None:
        return max(1, threads)
    try:
        return max(1, int(os.environ.get("MULAB_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class MuVector:
    """``mu[i]`` is μ_i for ``0 <= i <= dim``; ``provenance`` records how it was obtained."""

    mu: tuple[Fraction, ...]
    provenance: dict = field(default_factory=dict, compare=False, hash=False)
    field: Field = QQ

    def __getitem__(self, i: int) -> Fraction:
        return self.mu[i] if 0 <= i < len(self.mu) else Fraction(0)

    def __len__(self) -> int:
        return len(self.mu)

    def to_dict(self) -> dict:
        return {
            "mu": [str(x) for x in self.mu],
            "field": str(self.field),
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class GradedBettiTable:
    """``beta[(i, j)]`` = β_{i,j}; absent keys are zero."""

    beta: dict
    n: int
    field: Field

    def __getitem__(self, key) -> int:
        return self.beta.get(key, 0)

    def rows(self) -> dict:
        return dict(sorted(self.beta.items()))


@dataclass(frozen=True)
class SigmaVector:
    """``sigma[0]`` is σ̃_{-1}."""

    sigma: tuple[Fraction, ...]
    field: Field

    def at(self, i: int) -> Fraction:
        """σ̃_i for ``i >= -1``."""
        j = i + 1
        return self.sigma[j] if 0 <= j < len(self.sigma) else Fraction(0)


# --------------------------------------------------------------------------
# kernels


def star_levels(pair: RelativePair) -> list[list[list[int]]]:
    """For every vertex id ``v``, the link pair faces ``{G : G ⊔ v ∈ Δ∖Γ}`` by cardinality."""
    stars: list[list[list[int]]] = [[] for _ in range(pair.n)]
    for k, lev in enumerate(pair.levels):
        if k == 0:
            continue
        for f in lev:
            for b in iter_bits(f):
                st = stars[b.bit_length() - 1]
                while len(st) < k:
                    st.append([])
                st[k - 1].append(f ^ b)
    return stars


def _subset_table(levels: list[list[int]], vbits: Sequence[int], p: int, start: int = 0,
                  size0: int = 0, width: int | None = None) -> list[list[int]]:
    """``table[k][j]`` = Σ over subsets W (of size k) of b̃_{j-1} of the faces inside W.

    Only subsets of ``vbits[start:]`` are enumerated; ``size0`` vertices are
    already decided in.  Faces must use no vertex outside ``vbits``.
    """
    nv = len(vbits)
    if width is None:
        width = len(levels)
    table = [[0] * width for _ in range(nv + 1)]

    def rec(j, size, lv):
        if j == nv:
            b = betti_of_levels(lv, p)
            row = table[size]
            for idx, val in enumerate(b):
                if val:
                    row[idx] += val
            return
        rec(j + 1, size + 1, lv)
        bit = vbits[j]
        nl = [[f for f in lev if not f & bit] for lev in lv]
        while nl and not nl[-1]:
            nl.pop()
        if nl:
            rec(j + 1, size, nl)

    trimmed = [list(lev) for lev in levels]
    while trimmed and not trimmed[-1]:
        trimmed.pop()
    if trimmed:
        rec(start, size0, trimmed)
    return table


def _subset_task(args):
    levels, vbits, p, prefix_bits, prefix_len, width = args
    lv = levels
    size0 = 0
    for j in range(prefix_len):
        bit = vbits[j]
        if prefix_bits >> j & 1:
            size0 += 1
        else:
            lv = [[f for f in lev if not f & bit] for lev in lv]
    return _subset_table(lv, vbits, p, start=prefix_len, size0=size0, width=width)


def subset_table(levels, vbits: Sequence[int], p: int, threads: int = 1) -> list[list[int]]:
    width = len(levels)
    if threads <= 1 or len(vbits) < 8:
        return _subset_table([list(x) for x in levels], vbits, p, width=width)
    prefix_len = min(len(vbits) - 4, max(1, math.ceil(math.log2(threads)) + 3))
    tasks = [([list(x) for x in levels], list(vbits), p, s, prefix_len, width)
             for s in range(1 << prefix_len)]
    total = [[0] * width for _ in range(len(vbits) + 1)]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        for part in ex.map(_subset_task, tasks):
            for k, row in enumerate(part):
                tr = total[k]
                for j, v in enumerate(row):
                    tr[j] += v
    return total


def _sigma_from_table(table: list[list[int]], n: int, width: int) -> tuple[Fraction, ...]:
    out = []
    for j in range(width):
        s = Fraction(0)
        for k in range(n + 1):
            v = table[k][j] if j < len(table[k]) else 0
            if v:
                s += Fraction(v, comb(n, k))
        out.append(s / (n + 1))
    return tuple(out)


# --------------------------------------------------------------------------
# public operations


def graded_betti(p, field: Field | str = QQ, budget: int = DEFAULT_SUBSET_BUDGET,
                 threads: int | None = None) -> GradedBettiTable:
    """β_{k-i,k} = Σ_{|W|=k} b̃_{i-1}(Δ_W, Γ_W), summed over all induced sub-pairs."""
    pair = _pair(p)
    k = Field.parse(field)
    n = pair.n
    if n > budget:
        raise ResourceError(f"{n} vertices exceed the subset budget {budget}")
    vbits = [1 << i for i in range(n)]
    table = subset_table(pair.levels, vbits, k.p, thread_count(threads))
    beta = {}
    for size, row in enumerate(table):
        for j, v in enumerate(row):
            if v:
                i = j  # b̃_{i-1} with i == j
                beta[(size - i, size)] = v
    return GradedBettiTable(beta, n, k)


def sigma_tilde(p, field: Field | str = QQ, budget: int = DEFAULT_SUBSET_BUDGET,
                threads: int | None = None) -> SigmaVector:
    """σ̃_{i-1} = 1/(n+1) Σ_k β_{k-i,k} / C(n,k), as exact rationals."""
    pair = _pair(p)
    k = Field.parse(field)
    if pair.is_void:
        return SigmaVector((Fraction(0),), k)
    table = graded_betti(pair, k, budget, threads)
    n = pair.n
    width = pair.dim + 2
    out = []
    for i in range(width):
        s = Fraction(0)
        for size in range(n + 1):
            v = table[(size - i, size)]
            if v:
                s += Fraction(v, comb(n, size))
        out.append(s / (n + 1))
    return SigmaVector(tuple(out), k)


def _ordering_ids(pair: RelativePair, ordering) -> list[int]:
    ids = []
    for lab in ordering:
        i = pair.delta.index.get(lab)
        if i is None:
            raise MalformedInputError(f"ordering mentions unknown vertex {lab!r}")
        ids.append(i)
    if sorted(ids) != list(range(pair.n)):
        raise MalformedInputError("ordering is not a permutation of the vertex set")
    return ids


def _mu_width(pair: RelativePair) -> int:
    return 0 if pair.dim is None else pair.dim + 1


def _link_contribution(star: list[list[int]], prefix: int, width: int, p: int) -> list[int]:
    lv = [[g for g in lev if g & ~prefix == 0] for lev in star[:width + 1]]
    while lv and not lv[-1]:
        lv.pop()
    if not lv:
        return []
    return betti_of_levels(lv, p)[:width]


def mu_ordering(p, ordering, field: Field | str = QQ, debug: bool = False) -> MuVector:
    """μ^ς_i = Σ_k b̃_{i-1}(lk(v_k, Δ_{v_1..v_k}), lk(v_k, Γ_{v_1..v_k})) for 0 <= i <= dim."""
    pair = _pair(p)
    k = Field.parse(field)
    ids = _ordering_ids(pair, ordering)
    width = _mu_width(pair)
    stars = star_levels(pair)
    mu = [0] * width
    prefix = 0
    for v in ids:
        prefix |= 1 << v
        for i, b in enumerate(_link_contribution(stars[v], prefix, width, k.p)):
            mu[i] += b
    if debug and width:
        for other in (Field(2), QQ):
            again = mu_ordering(pair, ordering, other).mu
            if tuple(again[:2]) != tuple(Fraction(x) for x in mu[:2]):
                raise AssertionError("μ_0/μ_1 depend on the field")
    return MuVector(tuple(Fraction(x) for x in mu),
                    {"method": "ordering", "ordering": [str(pair.labels[i]) for i in ids]}, k)


def mu_enumerated(p, field: Field | str = QQ, limit: int = ENUMERATION_LIMIT) -> MuVector:
    """Exact average of :func:`mu_ordering` over all ``n!`` orderings.

    The per-vertex contribution only depends on the vertex and the set of
    vertices before it, so contributions are memoised on that pair; the
    sum itself still runs over every ordering.
    """
    pair = _pair(p)
    k = Field.parse(field)
    n = pair.n
    if n > limit:
        raise ResourceError(f"{n} vertices exceed the enumeration limit {limit}")
    width = _mu_width(pair)
    stars = star_levels(pair)
    memo: dict[tuple[int, int], list[int]] = {}
    totals = [0] * width
    for perm in itertools.permutations(range(n)):
        prefix = 0
        for v in perm:
            prefix |= 1 << v
            key = (v, prefix)
            c = memo.get(key)
            if c is None:
                c = memo[key] = _link_contribution(stars[v], prefix, width, k.p)
            for i, b in enumerate(c):
                totals[i] += b
    nf = factorial(n)
    return MuVector(tuple(Fraction(t, nf) for t in totals), {"method": "enumerated", "orderings": nf}, k)


def _sigma01_from_adj(adj: Sequence[int], bag_limit: int) -> tuple[Fraction, Fraction]:
    """σ̃_{-1} and σ̃_0 of any complex with the 1-skeleton given by ``adj``."""
    n = len(adj)
    sums = component_sums(adj, bag_limit)
    s = Fraction(0)
    for size in range(1, n + 1):
        excess = sums[size] - comb(n, size)  # Σ b̃_0 = Σ (components - 1)
        if excess:
            s += Fraction(excess, comb(n, size))
    return Fraction(1, n + 1), s / (n + 1)


def sigma01_graph(c: SimplicialComplex, bag_limit: int = DEFAULT_GRAPH_BAG_LIMIT) -> tuple[Fraction, Fraction]:
    """σ̃_{-1} and σ̃_0 of an absolute complex from its 1-skeleton alone."""
    if c.is_void:
        return Fraction(0), Fraction(0)
    return _sigma01_from_adj(list(c.adjacency), bag_limit)


def _mu01_graph(pair: RelativePair, budget: int) -> tuple[Fraction, Fraction]:
    """Exact μ_0, μ_1 of an absolute complex from link graphs only.

    ``budget`` bounds the bag size of the tree decompositions used for
    link graphs too large to enumerate.
    """
    c = pair.delta
    mu0 = Fraction(0)
    mu1 = Fraction(0)
    lv = c.levels
    tri = lv[3] if len(lv) > 3 else ()
    ladj: list[dict[int, int]] = [dict() for _ in range(c.n)]
    for t in tri:
        ids = bit_ids(t)
        for v in ids:
            a, b = [u for u in ids if u != v]
            d = ladj[v]
            d[a] = d.get(a, 0) | (1 << b)
            d[b] = d.get(b, 0) | (1 << a)
    for v in range(c.n):
        nbrs = bit_ids(c.adjacency[v])
        local = {u: i for i, u in enumerate(nbrs)}
        adj = [0] * len(nbrs)
        for u, m in ladj[v].items():
            lm = 0
            for w in bit_ids(m):
                lm |= 1 << local[w]
            adj[local[u]] = lm
        s_1, s0 = _sigma01_from_adj(adj, budget)
        mu0 += s_1
        mu1 += s0
    return mu0, mu1


def mu_exact(p, field: Field | str = QQ, upto: int | None = None,
             budget: int | None = None, threads: int | None = None,
             bag_limit: int = DEFAULT_GRAPH_BAG_LIMIT) -> MuVector:
    """μ_i = Σ_v σ̃_{i-1}(lk(v,Δ), lk(v,Γ)), exact, for ``0 <= i <= dim``.

    ``upto`` limits the degrees computed.  For absolute complexes and
    ``upto <= 1`` only link graphs are needed; that path has no vertex
    budget and is limited by ``bag_limit`` (tree decomposition bag size)
    instead.  ``budget`` caps link vertex counts on the general path.
    """
    pair = _pair(p)
    k = Field.parse(field)
    width = _mu_width(pair)
    if upto is not None:
        width = min(width, upto + 1)
    if width == 0:
        return MuVector((), {"method": "exact-hochster"}, k)
    if pair.is_absolute and width <= 2:
        mu0, mu1 = _mu01_graph(pair, bag_limit)
        return MuVector((mu0, mu1)[:width], {"method": "exact-hochster", "path": "link-graph"}, k)
    sigmas = vertex_sigmas(pair, k, budget, threads)
    mu = [Fraction(0)] * width
    for sig in sigmas:
        for i in range(width):
            mu[i] += sig[i]
    return MuVector(tuple(mu), {"method": "exact-hochster", "path": "hochster"}, k)


_SIGMA_CACHE: dict = {}
_SIGMA_CACHE_SIZE = 16


def vertex_sigmas(p, field: Field | str = QQ, budget: int | None = None,
                  threads: int | None = None) -> list[tuple[Fraction, ...]]:
    """σ̃_{-1}..σ̃_{dim-1} of the link pair of every vertex, indexed by vertex id.

    Results are cached per (pair, field, budget), since several verifiers
    ask for the same sums.
    """
    pair = _pair(p)
    k = Field.parse(field)
    budget = budget or DEFAULT_LINK_BUDGET
    width = _mu_width(pair)
    key = (pair.delta.labels, pair.delta.facets, pair.gamma_facets, k.p, budget)
    hit = _SIGMA_CACHE.get(key)
    if hit is not None:
        return hit
    stars = star_levels(pair)
    jobs = []
    for v in range(pair.n):
        star = [list(x) for x in stars[v][:width + 1]]
        while star and not star[-1]:
            star.pop()
        vm = 0
        for lev in star:
            for g in lev:
                vm |= g
        vbits = list(iter_bits(vm))
        if len(vbits) > budget:
            # fail before doing any work
            raise ResourceError(f"vertex link with {len(vbits)} vertices exceeds budget {budget}")
        jobs.append((star, vbits))
    nthreads = thread_count(threads)
    out = []
    for star, vbits in jobs:
        if not star:
            out.append((Fraction(0),) * width)
            continue
        nv = len(vbits)
        table = subset_table(star, vbits, k.p, nthreads if nv >= 14 else 1)
        out.append(tuple(_sigma_from_table(table, nv, width)))
    if len(_SIGMA_CACHE) >= _SIGMA_CACHE_SIZE:
        _SIGMA_CACHE.pop(next(iter(_SIGMA_CACHE)))
    _SIGMA_CACHE[key] = out
    return out


def sample_ordering(n: int, seed: int, index: int) -> list[int]:
    """Uniform permutation of ``range(n)`` keyed by ``(seed, index)`` only."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=16).digest()
    rng = random.Random(int.from_bytes(digest, "big"))
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


def mu_sampled(p, field: Field | str = QQ, samples: int = 100, seed: int = 0) -> MuVector:
    """Sample mean of μ^ς over seeded uniform orderings, with standard errors."""
    if samples < 1:
        raise MalformedInputError("need at least one sample")
    pair = _pair(p)
    k = Field.parse(field)
    width = _mu_width(pair)
    stars = star_levels(pair)
    rows = []
    for idx in range(samples):
        perm = sample_ordering(pair.n, seed, idx)
        mu = [0] * width
        prefix = 0
        for v in perm:
            prefix |= 1 << v
            for i, b in enumerate(_link_contribution(stars[v], prefix, width, k.p)):
                mu[i] += b
        rows.append(mu)
    means = tuple(Fraction(sum(r[i] for r in rows), samples) for i in range(width))
    if samples > 1:
        stderr = [statistics.stdev([r[i] for r in rows]) / math.sqrt(samples) for i in range(width)]
    else:
        stderr = [float("nan")] * width
    prov = {"method": "sampled", "samples": samples, "seed": seed, "stderr": stderr}
    return MuVector(means, prov, k)


def morse_defect(p, mu: MuVector, field: Field | str | None = None) -> list[Fraction]:
    """defect_i = Σ_{j<=i} (-1)^{i-j} (μ_j - b_j); each must be non-negative."""
    pair = _pair(p)
    k = Field.parse(field) if field is not None else mu.field
    betti = reduced_betti(pair, k)
    out = []
    acc = Fraction(0)
    for i in range(len(mu)):
        acc = -acc + mu[i] - betti.b(i)
        out.append(acc)
    return out
