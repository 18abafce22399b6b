"""The bundled evidence for a non-surjective map that is onto every free nilpotent quotient."""

import pytest

from freecover.witness import question_1_3_witness, witness_holds


def test_rank_two(golden):
    rep = question_1_3_witness(2)
    assert rep["alpha"] == "baBBAA"
    assert rep["fold"] == {"surjective": False, "image_vertices": 7, "image_edges": 8}
    assert rep["nilpotent"] == {str(k): True for k in range(2, 7)}
    assert rep["whitehead"]["not_separable_certified"]
    assert rep["whitehead"]["reduction"]["primitive"] is False
    assert rep["certificate"] == golden("witness5_certificate.json")
    assert witness_holds(rep)


def test_rank_four_alpha_and_guard():
    rep = question_1_3_witness(4, cap=3, q_list=(2,), depth=1)
    assert rep["alpha"] == "dcbaDDCCBBAA"
    assert "skipped" in rep["whitehead"]["reduction"]
    assert rep["certificate"]["q"] == 2
    # the reduction was skipped, so the bundle is incomplete
    assert not witness_holds(rep)


def test_rank_three():
    rep = question_1_3_witness(3, q_list=(2,), depth=1)
    assert witness_holds(rep)
    assert rep["whitehead"]["reduction"]["minimal_length"] == 20


def test_rank_one_rejected():
    with pytest.raises(ValueError):
        question_1_3_witness(1)
