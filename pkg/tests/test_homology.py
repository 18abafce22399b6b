"""Deck and lift matrices on cover homology, and non-surjectivity certificates."""

import random

import pytest
from hypothesis import given, strategies as st

from freecover import intmat
from freecover.covers import build_tower, mod_q_cover, rose_cover, symmetric_group_quotient, build_cover
from freecover.homology import (NotALoopError, cycle_class, deck_matrices, deck_matrix, equivariance_check,
                                find_nonsurjectivity_certificate, is_epi_on_homology, lift_matrix,
                                smith_normal_form)
from freecover.words import (Endomorphism, Word, commutator, conjugating_endomorphism, conjugator_word, inner,
                             random_automorphism, word)

from conftest import endomorphisms, words

COVERS = [(2, 2), (2, 3), (3, 2)]


def loops(X, rng, count, length=6):
    """Random closed paths at the basepoint: a word followed by its tree path home."""
    out = []
    for _ in range(count):
        ls = [rng.choice([1, -1]) * rng.randint(1, X.rank) for _ in range(rng.randint(0, length))]
        w = Word.identity(X.rank)
        for a in ls:
            w = w * Word.generator(a, X.rank)
        end = X.quotient.psi(w)
        out.append(w * X.tree_paths[end].inverse())
    return out


def test_basis_loops_give_unit_vectors():
    for n, q in COVERS:
        X = mod_q_cover(n, q)
        r = X.homology_rank
        for k, w in enumerate(X.loop_words):
            assert cycle_class(X, w) == tuple(int(i == k) for i in range(r))
        for p in X.tree_paths:
            end, vec = X.trace(p)
            assert not any(vec)


def test_commutator_class_mod_2():
    X = mod_q_cover(2, 2)
    v = cycle_class(X, commutator(word("a"), word("b")))
    assert set(v) <= {-1, 0, 1} and 0 < sum(map(abs, v)) <= 4
    with pytest.raises(NotALoopError):
        cycle_class(X, word("a"))


@given(st.integers(0, 10_000))
def test_cycle_class_is_abelianization_of_subgroup(seed):
    rng = random.Random(seed)
    X = mod_q_cover(2, 3)
    u, v = loops(X, rng, 2)
    cu, cv = cycle_class(X, u), cycle_class(X, v)
    assert cycle_class(X, u * v) == tuple(a + b for a, b in zip(cu, cv))
    assert not any(cycle_class(X, commutator(u, v)))


@pytest.mark.parametrize("n,q", COVERS)
def test_trace_law_and_faithfulness(n, q):
    X = mod_q_cover(n, q)
    r = X.homology_rank
    mats = deck_matrices(X)
    assert mats[0] == intmat.identity(r)
    assert intmat.trace(mats[0]) == r
    for g in range(1, X.degree):
        assert intmat.trace(mats[g]) == 1
        assert mats[g] != intmat.identity(r)
        assert is_epi_on_homology(mats[g])


@pytest.mark.parametrize("n,q", COVERS)
def test_deck_matrices_form_a_representation(n, q):
    X = mod_q_cover(n, q)
    mats = deck_matrices(X)
    Q = X.quotient
    for g in range(X.degree):
        for h in range(X.degree):
            assert intmat.matmul(mats[g], mats[h]) == mats[Q.mul(g, h)]


def test_deck_on_nonabelian_cover():
    X = build_cover(symmetric_group_quotient())
    mats = deck_matrices(X)
    assert X.homology_rank == 7
    assert [intmat.trace(m) for m in mats] == [7] + [1] * 5


def test_deck_example_01():
    X = mod_q_cover(2, 2)
    m = deck_matrix(X, 1)
    assert m.source == "01" and intmat.trace(m.matrix) == 1


@given(endomorphisms(2, 4), endomorphisms(2, 4))
def test_lift_is_functorial(phi, psi):
    X = mod_q_cover(2, 2)
    assert lift_matrix(phi @ psi, X).matrix == intmat.matmul(lift_matrix(phi, X).matrix, lift_matrix(psi, X).matrix)


def test_lift_identity():
    for n, q in COVERS:
        X = mod_q_cover(n, q)
        assert lift_matrix(Endomorphism.identity(n), X).matrix == intmat.identity(X.homology_rank)


@given(st.integers(0, 10_000), st.integers(1, 10))
def test_automorphism_lifts_are_invertible(seed, steps):
    phi = random_automorphism(random.Random(seed), 2, steps)
    for X in (mod_q_cover(2, 2), mod_q_cover(2, 3)):
        m = lift_matrix(phi, X).matrix
        assert is_epi_on_homology(m)
        D, U, V = smith_normal_form(m)
        assert all(D[i][i] == 1 for i in range(len(m)))


def test_equivariance_examples():
    X = mod_q_cover(2, 2)
    assert equivariance_check(Endomorphism.identity(2), X)
    assert equivariance_check(inner(word("abA")), X)
    assert not equivariance_check(Endomorphism.parse("ab,b"), X)
    with pytest.raises(ValueError):
        equivariance_check(Endomorphism.parse("aa,b"), X)


def test_certificate_examples():
    assert find_nonsurjectivity_certificate(Endomorphism.identity(2), (2, 3), 2) is None
    c = find_nonsurjectivity_certificate(Endomorphism.parse("aa,b"), (2, 3), 2)
    assert (c.q, c.level, c.snf_diagonal) == (2, 0, (1, 2))
    phi = conjugating_endomorphism(conjugator_word(2))
    log = []
    c = find_nonsurjectivity_certificate(phi, (2, 3), 2, log=log)
    assert (c.q, c.level, c.cover_degree) == (2, 1, 4)
    assert c.snf_diagonal == (1, 1, 1, 1, 3)
    assert abs(intmat.det(c.matrix)) == 3
    assert [entry["det"] for entry in log] == [1, -3]


def test_conjugating_endo_is_trivial_on_rose_homology():
    phi = conjugating_endomorphism(conjugator_word(2))
    assert lift_matrix(phi, rose_cover(2)).matrix == intmat.identity(2)


def test_nontrivial_goal():
    phi = inner(word("ab"))
    c = find_nonsurjectivity_certificate(phi, (2,), 1, goal="nontrivial")
    # conjugation by ab acts through the deck translation by its image
    assert (c.q, c.level, c.verdict) == (2, 1, "nontrivial")
    # conjugation by a loop of the cover is inner there, so trivial on its homology
    assert find_nonsurjectivity_certificate(inner(word("abAB")), (2,), 1, goal="nontrivial") is None
    assert find_nonsurjectivity_certificate(Endomorphism.identity(2), (2,), 1, goal="nontrivial") is None
    with pytest.raises(ValueError):
        find_nonsurjectivity_certificate(phi, goal="epi")


@pytest.mark.slow
def test_level_two_lift_of_automorphism():
    X = build_tower(2, 2, 2).cover(2)
    m = lift_matrix(Endomorphism.parse("ab,b"), X).matrix
    assert len(m) == 129 and abs(intmat.det(m)) == 1
