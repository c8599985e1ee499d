from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulab.complex import (RelativePair, SimplicialComplex, build_complex, cone, connected_components,
                           f_h_vectors, h_from_f, induced, link)
from mulab.errors import MalformedInputError


def boundary(d):
    verts = range(d + 2)
    return build_complex([[v for v in verts if v != i] for i in verts])


random_complexes = st.lists(
    st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=8
).map(build_complex)


def test_facets_are_maximal_and_labels_dense():
    c = build_complex([["a", "b"], ["b", "c", "a"], ["c"]])
    assert c.n == 3
    assert c.facet_list() == [("a", "b", "c")]
    assert c.dim == 2


def test_void_and_empty_complex_conventions():
    void = SimplicialComplex.void()
    empty = SimplicialComplex.empty()
    assert void.is_void and void.dim is None
    assert not empty.is_void and empty.dim == -1
    assert f_h_vectors(RelativePair(void))[0].f == (0,)
    assert f_h_vectors(RelativePair(empty))[0].f == (1,)


def test_build_rejects_repeated_vertex_in_facet():
    with pytest.raises(MalformedInputError):
        build_complex([[1, 1, 2]])


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_simplex_boundary_f_vector(d):
    f, h = f_h_vectors(boundary(d))
    assert f.f == tuple(comb(d + 2, j) for j in range(d + 2))
    assert h.h == (1,) * (d + 2)


def test_octahedron_h_vector():
    oct_ = build_complex([[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)])
    f, h = f_h_vectors(oct_)
    assert f.f == (1, 6, 12, 8)
    assert h.h == (1, 3, 3, 1)
    assert h.g2 == 0


def test_h_from_f_matches_polynomial_identity():
    # Σ h_i t^{d-i} = Σ f_{j-1} (t-1)^{d-j}; check at t = 2 and t = 3
    f = (1, 7, 21, 14)
    d = 3
    h = h_from_f(f, d)
    for t in (2, 3):
        assert sum(h[i] * t ** (d - i) for i in range(d + 1)) == \
            sum(f[j] * (t - 1) ** (d - j) for j in range(d + 1))


def test_link_and_induced():
    c = boundary(3)
    lk = link(c, [0])
    assert lk.canonical() == boundary(2).relabel(lambda v: v + 1).canonical()
    sub = induced(c, [0, 1, 2])
    assert sub.canonical() == {frozenset({0, 1, 2})}


def test_link_of_non_face_is_void():
    c = build_complex([[0, 1], [1, 2]])
    assert link(c, [0, 2]).is_void
    assert link(c, ["missing"]).is_void


def test_link_of_empty_face_is_the_complex():
    c = boundary(2)
    assert link(c, []).canonical() == c.canonical()


def test_link_distinguishes_empty_complex_from_void():
    tri = build_complex([["a", "b"], ["b", "c"], ["a", "c"]])
    # a facet has link {∅}; a non-face has the void link
    for face in tri.faces():
        lk = link(tri, face)
        expected_faces = {g for g in tri.faces() if not set(g) & set(face)
                          and tuple(sorted(set(g) | set(face), key=str)) in
                          {tuple(sorted(x, key=str)) for x in tri.faces()}}
        assert {frozenset(g) for g in lk.faces()} == {frozenset(g) for g in expected_faces}
    assert link(tri, ["a", "b"]).facets == (0,)


def test_cone_adds_apex_to_every_facet():
    c = build_complex([[0, 1], [2]])
    k = cone("x", c)
    assert sorted(k.facet_list(), key=str) == sorted([(0, 1, "x"), (2, "x")], key=str)


def test_connected_components():
    c = build_complex([[0, 1], [1, 2], [3, 4], [5]])
    assert sorted(map(sorted, connected_components(c))) == [[0, 1, 2], [3, 4], [5]]


def test_relative_pair_faces_and_link():
    delta = build_complex([[0, 1, 2]])
    gamma = build_complex([[0, 1], [1, 2], [0, 2]])
    pair = RelativePair(delta, gamma)
    f, h = f_h_vectors(pair)
    assert f.f == (0, 0, 0, 1)
    assert pair.dim == 2
    lk = pair.link([0])
    assert f_h_vectors(lk)[0].f == (0, 0, 1)


def test_gamma_must_be_subcomplex():
    with pytest.raises(MalformedInputError):
        RelativePair(build_complex([[0, 1]]), build_complex([[0, 2]]))


@settings(max_examples=60, deadline=None)
@given(random_complexes)
def test_f_vector_sums_over_faces(c):
    f, _ = f_h_vectors(c)
    assert sum(f.f) == len(c.face_set)
    # closure: dropping a vertex from a face gives a face
    for i in range(1, c.dim + 1):
        assert all(c.contains(m ^ b) for m in c.levels[i + 1] for b in (m & -m,))


@settings(max_examples=60, deadline=None)
@given(random_complexes)
def test_h_vector_sums_to_top_face_count(c):
    f, h = f_h_vectors(c)
    assert sum(h.h) == f.f[-1]


@settings(max_examples=40, deadline=None)
@given(random_complexes)
def test_vertex_link_face_counts(c):
    # Σ_v f_{j-1}(lk v) = (j+1) f_j
    f, _ = f_h_vectors(c)
    for j in range(0, c.dim + 1):
        total = 0
        for lab in c.labels:
            lf, _ = f_h_vectors(link(c, [lab]), c.dim)
            total += lf.f[j] if j < len(lf.f) else 0
        assert total == (j + 1) * f.f[j + 1]
