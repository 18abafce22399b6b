"""Whitehead graphs, cut vertices and Whitehead reduction."""

import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from freecover.whitehead import (CostGuardError, connectivity, cyclic_length, is_connected_no_cut_vertex,
                                 is_primitive, is_separable_certified_negative, whitehead_automorphisms,
                                 whitehead_graph, whitehead_reduce, whitehead_report)
from freecover.words import Word, conjugating_endomorphism, conjugator_word, random_automorphism, word

from conftest import words


def nx_graph(G):
    g = nx.Graph()
    g.add_nodes_from(G.vertices)
    g.add_edges_from(e for e in G.edges if e[0] != e[1])
    return g


def test_graph_examples():
    assert sorted(whitehead_graph(word("ab")).edges) == [(-2, 1), (-1, 2)]
    assert whitehead_graph(word("aa")).edges == ((-1, 1), (-1, 1))
    G = whitehead_graph(conjugator_word(2))
    assert len(G.edges) == 6
    assert is_connected_no_cut_vertex(G) == (True, [])


@given(words(3, 12, 1))
def test_edge_count_is_cyclic_length(w):
    if w.is_trivial():
        return
    assert len(whitehead_graph(w).edges) == cyclic_length(w)


@given(words(3, 14, 1))
def test_cut_vertices_match_networkx(w):
    if w.is_trivial():
        return
    G = whitehead_graph(w)
    g = nx_graph(G)
    connected, cut = connectivity(G)
    assert connected == nx.is_connected(g)
    assert set(cut) == set(nx.articulation_points(g))


def test_connectivity_examples():
    assert connectivity(whitehead_graph(word("ab"))) == (False, [])
    for n in (2, 3, 4):
        assert is_connected_no_cut_vertex(whitehead_graph(conjugator_word(n))) == (True, [])


def test_separability_certificate():
    phi = conjugating_endomorphism(conjugator_word(2))
    w = phi(word("ab"))
    assert is_separable_certified_negative(w)
    assert not is_separable_certified_negative(word("a"))
    assert is_separable_certified_negative(word("ABab"))
    assert whitehead_reduce(word("ABab"))[0] == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_image_of_primitive_is_certified(n):
    phi = conjugating_endomorphism(conjugator_word(n))
    w = phi(Word.generator(1, n) * Word.generator(2, n))
    rep = whitehead_report(w)
    assert rep["connected"] and rep["cut_vertices"] == []
    assert rep["not_separable_certified"]
    # the conjugator graph sits inside the image graph
    big = whitehead_graph(w).edge_counts()
    small = whitehead_graph(conjugator_word(n)).edge_counts()
    assert all(big[e] >= c for e, c in small.items())


def test_text_variant_rank_three_has_cut_vertices():
    connected, cut = connectivity(whitehead_graph(conjugator_word(3, "text")))
    assert connected and cut == [3, -3]


def test_reduce_examples():
    assert whitehead_reduce(word("ab"))[0] == 1 and is_primitive(word("ab"))
    assert whitehead_reduce(word("aabb"))[0] == 4
    phi = conjugating_endomorphism(conjugator_word(2))
    length, red = whitehead_reduce(phi(word("ab")))
    assert length == 14 and len(red) == 14


def test_cost_guard():
    w = conjugating_endomorphism(conjugator_word(4))(word("ab", 4))
    with pytest.raises(CostGuardError):
        whitehead_reduce(w)
    with pytest.raises(CostGuardError):
        whitehead_reduce(word("a", 4))


def test_move_count():
    # 2^n n! type-I moves plus 2n * 2^(2n-2) type-II moves
    assert len(whitehead_automorphisms(2)) == 8 + 4 * 4
    assert len(whitehead_automorphisms(3)) == 48 + 6 * 16


@given(st.integers(0, 10_000), st.integers(0, 5), st.integers(1, 3))
def test_images_of_generators_are_primitive(seed, steps, i):
    phi = random_automorphism(random.Random(seed), 3, steps)
    w = phi(Word.generator(i, 3))
    if cyclic_length(w) <= 20:
        assert is_primitive(w)
        assert not is_separable_certified_negative(w)


@given(words(2, 10, 1))
def test_certificate_implies_not_primitive(w):
    if w.is_trivial():
        return
    if is_separable_certified_negative(w):
        assert whitehead_reduce(w)[0] > 1


@given(st.integers(0, 10_000), st.integers(1, 6), words(2, 8, 1))
def test_reduced_length_is_automorphism_invariant(seed, steps, w):
    if w.is_trivial():
        return
    phi = random_automorphism(random.Random(seed), 2, steps)
    v = phi(w)
    if cyclic_length(v) <= 20:
        assert whitehead_reduce(v)[0] == whitehead_reduce(w)[0]


def test_dot_and_json():
    G = whitehead_graph(word("ab"))
    assert '"x1" -- "x2^-1"' in G.to_dot() or '"x2^-1" -- "x1"' in G.to_dot()
    assert G.to_json()["vertices"] == ["x1", "x1^-1", "x2", "x2^-1"]
