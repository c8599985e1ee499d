from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulab.complex import build_complex
from mulab.constructors import (csaszar_torus, projective_plane, simplex_boundary,
                                stacked_manifold)
from mulab.errors import MalformedInputError
from mulab.homology import reduced_betti
from mulab.pi1 import (GroupPresentation, cyclic_reduce, edge_path_presentation, free_reduce,
                       invert, m_bracket, tietze_simplify)


def test_free_and_cyclic_reduction():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    assert invert((1, -2)) == (2, -1)


def test_hollow_triangle_is_free_on_one_generator():
    pres = edge_path_presentation(simplex_boundary(1).complex)
    assert len(pres.generators) == 1 and pres.relators == ()
    assert tietze_simplify(pres).m_ub == 1


def test_tetrahedron_boundary_is_simply_connected():
    pres = edge_path_presentation(simplex_boundary(2).complex)
    assert len(pres.generators) == 3 and len(pres.relators) == 4
    assert tietze_simplify(pres).m_ub == 0


def test_projective_plane_abelianization_is_z2():
    pres = edge_path_presentation(projective_plane().complex)
    assert pres.abelian_invariants() == (0, (2,))


def test_torus_abelianization_is_z2_squared():
    pres = edge_path_presentation(csaszar_torus().complex)
    assert pres.abelian_invariants() == (2, ())
    assert tietze_simplify(pres).m_ub == 2


def test_free_group_presentation_is_untouched():
    g = GroupPresentation(("a", "b", "c"), ())
    r = tietze_simplify(g)
    assert r.m_ub == 3 and r.moves == 0


def test_negative_budget_rejected():
    with pytest.raises(MalformedInputError):
        tietze_simplify(GroupPresentation(("a",), ()), budget=-1)


def test_zero_budget_reports_exhaustion():
    pres = edge_path_presentation(simplex_boundary(2).complex)
    r = tietze_simplify(pres, budget=0)
    assert r.exhausted and r.m_ub == 3


def test_disconnected_input_rejected():
    with pytest.raises(MalformedInputError):
        edge_path_presentation(build_complex([[0, 1], [2, 3]]))


@pytest.mark.parametrize("cx,expected", [
    (simplex_boundary(4), (0, 0)),
    (projective_plane(), (1, 1)),
    (csaszar_torus(), (2, 2)),
    (stacked_manifold(4, 3, 2), (2, 2)),
])
def test_brackets(cx, expected):
    b = m_bracket(cx.complex)
    assert (b.m_lb, b.m_ub) == expected
    assert b.exact
    assert b.m_lb <= cx.m <= b.m_ub
    for p, (before, after) in b.abelian_check.items():
        assert before == after


def test_projective_plane_lower_bound_comes_from_two():
    b = m_bracket(projective_plane().complex)
    assert b.field_evidence["q"] == 0 and b.field_evidence["p:2"] == 1


def random_graph(rng, n):
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [tuple(rng.sample(range(n), 2)) for _ in range(n)]
    return build_complex(edges)


def test_graph_bracket_equals_first_betti():
    rng = random.Random(2)
    for _ in range(20):
        g = random_graph(rng, rng.randint(2, 9))
        pres = edge_path_presentation(g)
        assert pres.relators == ()
        b = m_bracket(g)
        assert b.m_lb == b.m_ub == reduced_betti(g, max_dim=1).b(1)


connected_2d = st.integers(3, 7).flatmap(lambda n: st.lists(
    st.lists(st.integers(0, n - 1), min_size=2, max_size=3, unique=True), min_size=1, max_size=10
).map(lambda fs: build_complex(fs + [[i, i + 1] for i in range(n - 1)])))


@settings(max_examples=40, deadline=None)
@given(connected_2d)
def test_tietze_preserves_abelianization(c):
    pres = edge_path_presentation(c)
    r = tietze_simplify(pres)
    assert pres.abelian_invariants() == r.presentation.abelian_invariants()
    b = m_bracket(c)
    assert 0 <= b.m_lb <= b.m_ub
