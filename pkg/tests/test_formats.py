from __future__ import annotations

import pytest

from mulab.complex import RelativePair, SimplicialComplex, build_complex
from mulab.constructors import csaszar_torus
from mulab.errors import MalformedInputError
from mulab.formats import format_facets, format_poset, load, parse_facets, parse_poset
from mulab.poset import RelativePosetPair, poset_betti, random_simplicial_poset, three_parallel_edges


def test_plain_facet_file_round_trip():
    c = csaszar_torus().complex
    back = parse_facets(format_facets(c))
    assert back.is_absolute
    assert {frozenset(map(int, f)) for f in back.delta.facet_list()} == \
        {frozenset(f) for f in c.facet_list()}


def test_comments_and_blank_lines():
    p = parse_facets("# triangle\n\na b c  # the only facet\n")
    assert p.delta.facet_list() == [("a", "b", "c")]


def test_relative_sections():
    text = "[DELTA]\n0 1 2\n[GAMMA]\n0 1\n1 2\n0 2\n"
    p = parse_facets(text)
    assert not p.is_absolute
    again = parse_facets(format_facets(p))
    assert again.gamma.canonical() == p.gamma.canonical()


def test_empty_and_void_sections():
    p = parse_facets("[DELTA]\n0 1\n[GAMMA]\n{}\n")
    assert p.gamma.facets == (0,)
    q = parse_facets("[DELTA]\n0 1\n[GAMMA]\n")
    assert q.gamma.is_void
    assert format_facets(RelativePair(build_complex([[0, 1]]), SimplicialComplex.empty())).endswith("{}\n")


@pytest.mark.parametrize("text", [
    "[GAMMA]\n0\n",
    "[DELTA]\n0 1\n[DELTA]\n1 2\n",
    "0 1\n[DELTA]\n0 1\n",
    "[OTHER]\n0\n",
    "[DELTA]\n0 1\n[GAMMA]\n0 2\n",
])
def test_malformed_facet_files(text):
    with pytest.raises(MalformedInputError):
        parse_facets(text)


def test_poset_json_round_trip():
    for p in (three_parallel_edges(), random_simplicial_poset(5, 1)):
        back = parse_poset(format_poset(p))
        assert len(back.delta.faces) == len(p.faces)
        assert poset_betti(back) == poset_betti(p)


def test_relative_poset_round_trip():
    tp = three_parallel_edges()
    pair = RelativePosetPair(tp, [tp.root, "v1"])
    back = parse_poset(format_poset(pair))
    assert back.gamma == pair.gamma


@pytest.mark.parametrize("text", ["not json", "[]", '{"faces": [{"rank": 1}]}', '{"faces": [], "gamma": 3}'])
def test_malformed_poset_files(text):
    with pytest.raises(MalformedInputError):
        parse_poset(text)


def test_load_dispatches_on_suffix(tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("0 1 2\n")
    j = tmp_path / "p.json"
    j.write_text(format_poset(three_parallel_edges()))
    assert isinstance(load(f), RelativePair)
    assert isinstance(load(j), RelativePosetPair)
