"""Folding, membership, and surjectivity via Stallings graphs.

Two membership oracles that share no code with the folding: exhaustive
products of a Nielsen-reduced generating set, and permutation actions
whose point stabilizers have explicitly computed Schreier generators.
"""

import itertools
import json
import random

from hypothesis import given, strategies as st

from freecover.stallings import (LabeledGraph, complete_to_cover, contains, fold, graph_from_generators,
                                 image_graph, is_surjective, rank, rose, trim)
from freecover.words import Endomorphism, Word, conjugating_endomorphism, conjugator_word, random_automorphism, word

from conftest import words


def all_words(rank_, max_len):
    out = [Word.identity(rank_)]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for ls in frontier:
            for a in range(-rank_, rank_ + 1):
                if a and (not ls or ls[-1] != -a):
                    nxt.append(ls + (a,))
        out += [Word(ls, rank_) for ls in nxt]
        frontier = nxt
    return out


def products(gens, max_factors):
    """Reduced products of at most max_factors generators and inverses."""
    letters = list(gens) + [g.inverse() for g in gens]
    seen = {Word.identity(gens[0].rank)}
    frontier = set(seen)
    for _ in range(max_factors):
        frontier = {u * g for u in frontier for g in letters} - seen
        seen |= frontier
    return seen


def test_examples():
    assert graph_from_generators([word("a"), word("b")]).is_rose()
    g = graph_from_generators([word("aa"), word("b")])
    assert (g.num_vertices, len(g.edges)) == (2, 3)
    assert rank(g) == 2
    assert contains(g, word("aa")) and not contains(g, word("a"))
    assert contains(rose(2), word("abAAB"))
    assert rank(rose(3)) == 3


def test_nielsen_reduced_membership_brute_force():
    # {a^2, b} is Nielsen reduced, so every element of length <= 5 is a
    # product of at most 5 factors.
    gens = [word("aa"), word("b")]
    g = graph_from_generators(gens)
    members = {w for w in products(gens, 5) if len(w) <= 5}
    for w in all_words(2, 5):
        assert g.contains(w) == (w in members)


def schreier_generators(perms, rank_):
    """Generators of the stabilizer of 0 under x_i -> perms[i-1] (right action)."""
    n = len(perms[0])
    tree = {0: Word.identity(rank_)}
    queue = [0]
    while queue:
        p = queue.pop(0)
        for i in range(rank_):
            for s in (1, -1):
                img = perms[i][p] if s > 0 else perms[i].index(p)
                if img not in tree:
                    tree[img] = tree[p] * Word.generator(s * (i + 1), rank_)
                    queue.append(img)
    gens = []
    for p in range(n):
        if p not in tree:
            continue
        for i in range(rank_):
            q = perms[i][p]
            if q in tree:
                gens.append(tree[p] * Word.generator(i + 1, rank_) * tree[q].inverse())
    return [w for w in gens if not w.is_trivial()], len(tree)


def act(perms, w, p=0):
    for a in w.letters:
        p = perms[a - 1][p] if a > 0 else perms[-a - 1].index(p)
    return p


@given(st.integers(0, 10_000), st.integers(1, 6), st.lists(words(2, 8), max_size=15))
def test_stabilizer_membership_oracle(seed, n, sample):
    rng = random.Random(seed)
    perms = [tuple(rng.sample(range(n), n)) for _ in range(2)]
    gens, orbit = schreier_generators(perms, 2)
    if not gens:
        gens = [Word.identity(2)]
    g = graph_from_generators(gens, 2)
    assert g.is_cover()
    assert g.num_vertices == orbit
    assert rank(g) == orbit * (2 - 1) + 1
    for w in sample:
        assert g.contains(w) == (act(perms, w) == 0)


@given(st.lists(words(2, 7, 1), min_size=1, max_size=3), st.integers(0, 1000))
def test_fold_order_does_not_matter(gens, seed):
    a = graph_from_generators(gens, 2)
    b = graph_from_generators(gens, 2, rng=random.Random(seed))
    assert a == b
    assert a.is_folded() and a.is_core()


@given(st.lists(words(2, 7, 1), min_size=1, max_size=3))
def test_generators_are_members(gens):
    g = graph_from_generators(gens, 2)
    for w in gens:
        assert g.contains(w)
    for u, v in itertools.product(gens, repeat=2):
        assert g.contains(u * v.inverse())


def test_surjectivity():
    assert is_surjective(Endomorphism.identity(2))
    assert is_surjective(Endomorphism.parse("ab,b"))
    phi = conjugating_endomorphism(conjugator_word(2))
    assert not is_surjective(phi)
    g = image_graph(phi)
    assert not g.is_rose()
    assert (g.num_vertices, len(g.edges)) == (7, 8)


@given(st.integers(0, 10_000), st.integers(1, 12))
def test_automorphisms_are_surjective(seed, steps):
    assert is_surjective(random_automorphism(random.Random(seed), 3, steps))


def test_complete_to_cover():
    assert complete_to_cover(rose(2)).is_rose()
    g = complete_to_cover(graph_from_generators([word("aa"), word("b")]))
    assert g.is_cover() and g.num_vertices == 2
    empty = LabeledGraph(2, 1, (), 0)
    assert complete_to_cover(empty).is_rose()


@given(st.lists(words(2, 7, 1), min_size=1, max_size=3))
def test_completion_keeps_subgroup(gens):
    g = graph_from_generators(gens, 2)
    c = complete_to_cover(g)
    assert c.is_cover()
    for w in gens:
        assert c.contains(w)


def test_trim_removes_hairs():
    g = fold(3, [(0, 1, 1), (1, 2, 2), (1, 1, 2)], 2, 0)
    t = trim(g)
    assert t.is_core()
    assert t.num_vertices == 2


def test_json_and_dot_roundtrip():
    g = graph_from_generators([word("aab"), word("b")])
    assert LabeledGraph.from_json(json.dumps(g.to_json())).canonical() == g
    dot = g.to_dot()
    assert "doublecircle" in dot and 'label="x1"' in dot
