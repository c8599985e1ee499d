from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulab.complex import RelativePair, build_complex, f_h_vectors, link
from mulab.constructors import csaszar_torus, projective_plane, simplex_boundary
from mulab.errors import MalformedInputError
from mulab.homology import reduced_betti
from mulab.musigma import mu_exact, mu_ordering
from mulab.poset import (RelativePosetPair, barycentric_subdivision, build_poset, cellular_betti,
                         face_poset, poset_betti, poset_f_h, poset_link, poset_mu_enumerated,
                         poset_mu_exact, poset_mu_ordering, poset_restriction, random_simplicial_poset,
                         sd_ordering, three_parallel_edges)


def isomorphic(a, b):
    if a.n != b.n or len(a.facets) != len(b.facets):
        return False
    fa = {frozenset(f) for f in a.facet_list()}
    fb = {frozenset(f) for f in b.facet_list()}
    for perm in itertools.permutations(b.labels):
        m = dict(zip(a.labels, perm))
        if {frozenset(m[x] for x in f) for f in fa} == fb:
            return True
    return False


def test_three_parallel_edges_subdivision():
    sd = barycentric_subdivision(three_parallel_edges())
    assert f_h_vectors(sd)[0].f == (1, 5, 6)
    assert reduced_betti(sd).reduced == (0, 0, 2)


def test_three_parallel_edges_f_h():
    f, h = poset_f_h(three_parallel_edges())
    assert f.f == (1, 2, 3)
    assert h.h == (1, 0, 2)


def test_three_parallel_edges_mu():
    tp = three_parallel_edges()
    for order in (["v1", "v2"], ["v2", "v1"]):
        assert poset_mu_ordering(tp, order).mu == (1, 2)
    assert poset_mu_exact(tp).mu == (1, 2)


def test_three_parallel_edges_link_and_restriction():
    tp = three_parallel_edges()
    lk = poset_link("v1", tp)
    assert lk.rank == 1 and len(lk.vertices) == 3
    assert poset_restriction(tp, ["v1"]).vertices == ("v1",)
    assert len(poset_restriction(tp, []).faces) == 1
    assert len(poset_restriction(tp, tp.vertices).faces) == len(tp.faces)


def test_sd_ordering_places_barycenters_before_their_last_vertex():
    tp = three_parallel_edges()
    assert sd_ordering(tp, ["v1", "v2"]) == ["v1", "e1", "e2", "e3", "v2"]
    edge = face_poset(build_complex([["a", "b"]]))
    out = sd_ordering(edge, [("a",), ("b",)])
    assert out == [("a",), ("a", "b"), ("b",)]


def test_sd_ordering_rejects_non_permutation():
    with pytest.raises(MalformedInputError):
        sd_ordering(three_parallel_edges(), ["v1"])


def test_rank_two_face_with_three_covers_rejected():
    with pytest.raises(MalformedInputError):
        build_poset([
            {"id": "a", "rank": 1}, {"id": "b", "rank": 1}, {"id": "c", "rank": 1},
            {"id": "x", "rank": 2, "covers": ["a", "b", "c"]},
        ])


def test_non_boolean_interval_rejected():
    with pytest.raises(MalformedInputError) as err:
        build_poset([
            {"id": "a", "rank": 1}, {"id": "b", "rank": 1},
            {"id": "x", "rank": 2, "covers": ["a", "a"]},
        ])
    assert "x" in str(err.value)


def test_face_poset_of_complex_is_valid_and_agrees():
    c = csaszar_torus().complex
    p = face_poset(c)
    assert poset_f_h(p)[0].f == f_h_vectors(c)[0].f
    assert poset_betti(p) == reduced_betti(c).reduced


def test_link_in_face_poset_matches_complex_link():
    c = simplex_boundary(2).complex
    p = face_poset(c)
    for v in c.labels:
        lp = poset_link((v,), p)
        lc = link(c, [v])
        assert poset_f_h(lp)[0].f == f_h_vectors(lc)[0].f


def test_sd_of_link_is_link_in_sd():
    tp = three_parallel_edges()
    sd = barycentric_subdivision(tp)
    for v in tp.vertices:
        a = barycentric_subdivision(poset_link(v, tp))
        b = link(sd, [v])
        assert isomorphic(a, b)


def test_sd_betti_matches_complex_over_two_fields():
    rp2 = projective_plane().complex
    sd = barycentric_subdivision(face_poset(rp2))
    for k in ("q", "p:2"):
        assert reduced_betti(sd, k).reduced == reduced_betti(rp2, k).reduced


def test_cellular_betti_matches_subdivision():
    for seed in range(6):
        p = random_simplicial_poset(5, seed)
        for k in ("q", "p:2"):
            assert cellular_betti(p, k) == poset_betti(p, k)


def test_betti_invariant_under_relabelling():
    p = random_simplicial_poset(5, 3)
    renamed = build_poset([{"id": f"z{f.id}", "rank": f.rank, "covers": [f"z{c}" for c in f.covers] if f.rank > 1 else []}
                           for f in p.faces if f.rank > 0])
    assert poset_betti(renamed) == poset_betti(p)


def test_face_poset_mu_matches_complex_mu():
    c = csaszar_torus().complex
    assert poset_mu_exact(face_poset(c)).mu == mu_exact(c).mu


def test_poset_mu_exact_matches_enumeration():
    for seed in range(5):
        p = random_simplicial_poset(5, seed)
        for k in ("q", "p:2"):
            assert poset_mu_exact(p, k).mu == poset_mu_enumerated(p, k).mu


def test_single_vertex_poset():
    p = build_poset([{"id": "v", "rank": 1}])
    assert poset_mu_exact(p).mu == (1,)


def test_relative_poset_pair_f_vector():
    tp = three_parallel_edges()
    root = tp.root
    pair = RelativePosetPair(tp, [root])
    assert poset_f_h(pair)[0].f == (0, 2, 3)


def test_gamma_must_be_lower_ideal():
    with pytest.raises(MalformedInputError):
        RelativePosetPair(three_parallel_edges(), ["e1"])


def check_lemma(p, order, field="q"):
    sd = barycentric_subdivision(p)
    return poset_mu_ordering(p, order, field).mu == mu_ordering(sd, sd_ordering(p, order), field).mu


def test_subdivision_preserves_mu_on_every_ordering():
    for seed in range(4):
        p = random_simplicial_poset(5, seed)
        for order in itertools.permutations(p.vertices):
            assert check_lemma(p, list(order))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["q", "p:2"]))
def test_subdivision_preserves_mu_on_sampled_orderings(seed, field):
    rng = random.Random(seed)
    p = random_simplicial_poset(6, seed % 50)
    order = list(p.vertices)
    rng.shuffle(order)
    assert check_lemma(p, order, field)


def test_relative_sd_pair_matches_subdivision_of_gamma():
    tp = three_parallel_edges()
    pair = RelativePosetPair(tp, [tp.root, "v1"])
    sdp = pair.sd_pair()
    assert isinstance(sdp, RelativePair)
    assert sdp.gamma.n == 1
