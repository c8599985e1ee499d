from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulab.complex import RelativePair, build_complex, induced, link
from mulab.constructors import csaszar_torus, cyclic_boundary, projective_plane, simplex_boundary
from mulab.errors import MalformedInputError, ResourceError
from mulab.homology import Field, reduced_betti
from mulab.musigma import (graded_betti, morse_defect, mu_enumerated, mu_exact, mu_ordering,
                           mu_sampled, sample_ordering, sigma01_graph, sigma_tilde, vertex_sigmas)


def brute_mu_ordering(c, order, p=0):
    """μ^ς straight from the definition: links inside growing induced subcomplexes."""
    width = c.dim + 1
    mu = [0] * width
    for k, v in enumerate(order):
        sub = induced(c, order[: k + 1])
        lk = link(sub, [v])
        b = reduced_betti(RelativePair(lk), Field(p)).reduced if not lk.is_void else ()
        for i in range(width):
            if i < len(b):
                mu[i] += b[i]
    return tuple(Fraction(x) for x in mu)


def random_complex(rng, n=6, k=6, top=4):
    return build_complex([rng.sample(range(n), rng.randint(1, min(top, n))) for _ in range(k)])


def test_mu_ordering_matches_definition():
    rng = random.Random(0)
    for _ in range(25):
        c = random_complex(rng)
        order = list(c.labels)
        rng.shuffle(order)
        assert mu_ordering(c, order).mu == brute_mu_ordering(c, order)


def test_single_vertex():
    c = build_complex([[0]])
    assert mu_exact(c).mu == (1,)
    assert mu_enumerated(c).mu == (1,)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_simplex_boundary_mu_is_perfect(d):
    mu = mu_exact(simplex_boundary(d).complex).mu
    assert mu == (1,) + (0,) * (d - 1) + (1,)


def test_torus_mu():
    assert mu_exact(csaszar_torus().complex).mu == (1, 2, 1)


def test_projective_plane_mu_over_two_fields():
    rp2 = projective_plane().complex
    assert mu_exact(rp2, "q").mu == (1, 1, 1)
    assert mu_exact(rp2, "p:2").mu == (1, 1, 1)


def test_exact_matches_enumeration_on_random_complexes():
    rng = random.Random(7)
    for trial in range(30):
        c = random_complex(rng, n=rng.randint(3, 7))
        for p in (0, 2):
            assert mu_exact(c, Field(p)).mu == mu_enumerated(c, Field(p)).mu, (trial, p)


def test_exact_matches_enumeration_on_relative_pairs():
    rng = random.Random(11)
    for _ in range(15):
        delta = random_complex(rng, n=6)
        sub = [f for f in delta.facet_list() if rng.random() < 0.5]
        gamma = build_complex([f[:-1] if len(f) > 1 else f for f in sub])
        pair = RelativePair(delta, gamma)
        assert mu_exact(pair).mu == mu_enumerated(pair).mu


def test_graph_path_agrees_with_hochster_path():
    c = cyclic_boundary(8).complex
    graph = mu_exact(c, upto=1)
    full = mu_exact(c)
    assert graph.provenance["path"] == "link-graph"
    assert graph.mu == full.mu[:2]


def test_vertex_sigmas_sum_to_mu():
    c = csaszar_torus().complex
    sig = vertex_sigmas(c)
    assert tuple(sum(s[i] for s in sig) for i in range(3)) == mu_exact(c).mu


def test_graded_betti_of_hollow_triangle():
    # Stanley–Reisner ideal (xyz): one generator in degree 3
    t = graded_betti(simplex_boundary(1).complex)
    assert t.rows() == {(0, 0): 1, (1, 3): 1}


def test_graded_betti_of_two_points():
    # ideal (xy): one generator in degree 2
    t = graded_betti(build_complex([[0], [1]]))
    assert t.rows() == {(0, 0): 1, (1, 2): 1}


def test_sigma_tilde_definition():
    c = cyclic_boundary(7).complex
    table = graded_betti(c)
    n = c.n
    sig = sigma_tilde(c)
    for i in range(c.dim + 2):
        expected = sum(Fraction(table[(k - i, k)], comb(n, k)) for k in range(n + 1)) / (n + 1)
        assert sig.at(i - 1) == expected


def test_sigma01_graph_matches_sigma_tilde():
    c = link(cyclic_boundary(9).complex, [1])
    s = sigma_tilde(c)
    assert sigma01_graph(c) == (s.at(-1), s.at(0))


def test_enumeration_limit():
    with pytest.raises(ResourceError):
        mu_enumerated(cyclic_boundary(9).complex, limit=8)


def test_link_budget():
    with pytest.raises(ResourceError):
        mu_exact(cyclic_boundary(9).complex, budget=5)


def test_bad_ordering():
    c = simplex_boundary(2).complex
    with pytest.raises(MalformedInputError):
        mu_ordering(c, [0, 1, 2])
    with pytest.raises(MalformedInputError):
        mu_ordering(c, [0, 1, 2, 9])


def test_sample_ordering_is_deterministic_and_uniformish():
    assert sample_ordering(6, 3, 4) == sample_ordering(6, 3, 4)
    firsts = [sample_ordering(4, 0, i)[0] for i in range(2000)]
    counts = [firsts.count(v) for v in range(4)]
    assert min(counts) > 400


def test_sampled_mean_is_close_to_exact():
    c = csaszar_torus().complex
    s = mu_sampled(c, samples=200, seed=1)
    exact = mu_exact(c).mu
    for i in range(3):
        assert abs(float(s.mu[i] - exact[i])) < 5 * max(s.provenance["stderr"][i], 1e-9) + 1e-9


def test_exact_mu_averages_orderings():
    c = build_complex([[0, 1, 2], [2, 3], [3, 4], [4, 2]])
    total = [Fraction(0)] * 3
    perms = list(itertools.permutations(c.labels))
    for p in perms:
        for i, v in enumerate(mu_ordering(c, p).mu):
            total[i] += v
    assert tuple(t / factorial(len(c.labels)) for t in total) == mu_exact(c).mu


random_complexes = st.lists(
    st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=7
).map(build_complex)


@settings(max_examples=40, deadline=None)
@given(random_complexes, st.integers(0, 10_000))
def test_morse_inequalities_hold(c, seed):
    order = [c.labels[i] for i in sample_ordering(c.n, seed, 0)]
    for p in (0, 2):
        mu = mu_ordering(c, order, Field(p))
        assert all(x >= 0 for x in morse_defect(c, mu))


@settings(max_examples=30, deadline=None)
@given(random_complexes)
def test_mu_zero_counts_vertices_weighted_by_degree(c):
    expected = sum(Fraction(1, bin(a).count("1") + 1) for a in c.adjacency)
    assert mu_exact(c, upto=0).mu == (expected,)
