from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from mulab.complex import RelativePair, build_complex
from mulab.constructors import csaszar_torus, projective_plane, simplex_boundary
from mulab.errors import MalformedInputError, ResourceError
from mulab.homology import (GF2, QQ, Field, boundary_matrices, euler_characteristic, matrix_rank,
                            reduced_betti)


def dense_rank_mod_p(rows, p):
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] % p:
                f = m[r][c]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def oracle_betti(facets, p):
    """Reduced Betti numbers from dense signed boundary matrices."""
    faces = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(len(f) + 1):
            from itertools import combinations
            faces.update(combinations(f, k))
    by_dim = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    top = max(by_dim)
    ranks = {}
    for d in range(0, top + 1):
        rows = sorted(by_dim.get(d - 1, []))
        cols = sorted(by_dim.get(d, []))
        idx = {f: i for i, f in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, f in enumerate(cols):
            for i in range(len(f)):
                mat[idx[f[:i] + f[i + 1:]]][j] = (-1) ** i
        if not rows or not cols:
            ranks[d] = 0
        elif p == 0:
            ranks[d] = sympy.Matrix(mat).rank()
        else:
            ranks[d] = dense_rank_mod_p(mat, p)
    return tuple(len(by_dim.get(d, [])) - ranks.get(d, 0) - ranks.get(d + 1, 0)
                 for d in range(-1, top + 1))


def test_field_parsing():
    assert Field.parse("q") == QQ
    assert Field.parse("p:2") == GF2
    assert str(Field.parse("gf5")) == "p:5"
    assert str(Field.parse(3)) == "p:3"
    with pytest.raises(MalformedInputError):
        Field.parse("p:4")
    with pytest.raises(MalformedInputError):
        Field.parse("reals")


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_sphere_has_one_top_class(d):
    b = reduced_betti(simplex_boundary(d).complex)
    assert b.reduced == (0,) * (d + 1) + (1,)


def test_torus_betti_numbers():
    b = reduced_betti(csaszar_torus().complex)
    assert b.unreduced == (1, 2, 1)
    assert b.euler() == -1


def test_projective_plane_depends_on_characteristic():
    rp2 = projective_plane().complex
    assert reduced_betti(rp2, QQ).unreduced == (1, 0, 0)
    assert reduced_betti(rp2, "p:3").unreduced == (1, 0, 0)
    assert reduced_betti(rp2, GF2).unreduced == (1, 1, 1)


def test_void_and_empty_conventions():
    from mulab.complex import SimplicialComplex
    assert reduced_betti(SimplicialComplex.empty()).reduced == (1,)
    assert reduced_betti(RelativePair(SimplicialComplex.void())).reduced == ()


def test_relative_pair_of_disk_and_boundary():
    disk = build_complex([[0, 1, 2]])
    circle = build_complex([[0, 1], [1, 2], [0, 2]])
    b = reduced_betti(RelativePair(disk, circle))
    assert b.reduced == (0, 0, 0, 1)


def test_boundary_squares_to_zero():
    for p in (0, 2, 3):
        cc = boundary_matrices(csaszar_torus().complex, Field(p))
        cc.check()


def test_matrix_rank_over_fields():
    cols = [{0: 2, 1: 4}, {0: 1, 1: 2}]
    assert matrix_rank(cols, QQ) == 1
    assert matrix_rank(cols, Field(2)) == 1
    assert matrix_rank([{0: 2}], Field(2)) == 0


def test_face_budget():
    with pytest.raises(ResourceError):
        reduced_betti(simplex_boundary(4).complex, budget=10)


def test_euler_characteristic_matches_betti():
    c = csaszar_torus().complex
    assert euler_characteristic(c) == reduced_betti(c).euler()


random_complexes = st.lists(
    st.lists(st.integers(0, 6), min_size=1, max_size=5, unique=True), min_size=1, max_size=9
).map(build_complex)


@settings(max_examples=50, deadline=None)
@given(random_complexes, st.sampled_from([0, 2, 3, 5]))
def test_betti_matches_dense_oracle(c, p):
    ours = reduced_betti(c, Field(p)).reduced
    theirs = oracle_betti(c.facet_list(), p)
    assert ours == theirs


@settings(max_examples=50, deadline=None)
@given(random_complexes)
def test_euler_relation(c):
    for p in (0, 2):
        assert reduced_betti(c, Field(p)).euler() == euler_characteristic(c)


def test_random_relative_pairs_satisfy_long_exact_sequence_euler():
    rng = random.Random(3)
    for _ in range(30):
        facets = [rng.sample(range(7), rng.randint(1, 4)) for _ in range(6)]
        delta = build_complex(facets)
        sub = [f for f in delta.facet_list() if rng.random() < 0.4]
        gamma = build_complex([f[:-1] if len(f) > 1 else f for f in sub])
        pair = RelativePair(delta, gamma)
        chi = euler_characteristic(delta) - euler_characteristic(gamma)
        assert reduced_betti(pair).euler() == chi
