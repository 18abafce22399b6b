"""Command-line behaviour: outputs, exit codes and reproducibility."""

import json

import pytest

from freecover import __version__
from freecover.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_fold(capsys):
    code, doc = run_json(capsys, "fold", "aab", "b")
    assert code == 0
    assert doc["result"]["rank"] == 2
    assert doc["version"] == __version__
    assert doc["config"]["seed"] == 0 and doc["config"]["q_list"] == [2, 3]


def test_fold_dot(capsys):
    code, out, _ = run(capsys, "fold", "aab", "b", "--output", "dot")
    assert code == 0 and out.startswith("digraph")


def test_deck(capsys):
    code, doc = run_json(capsys, "deck", "--n", "2", "--q", "2", "--element", "01")
    assert code == 0
    m = doc["result"]["matrix"]
    assert len(m) == 5 and doc["result"]["trace"] == 1


def test_certify(capsys, golden):
    code, doc = run_json(capsys, "certify", "--phi", "aabbABabaBBAA,b")
    assert code == 0
    assert doc["result"]["certificate"] == golden("witness5_certificate.json")
    code, doc = run_json(capsys, "certify", "--phi", "ab,b", "--depth", "1")
    assert code == 1 and doc["result"]["certificate"] is None


def test_check_epi_and_homrep(capsys):
    code, doc = run_json(capsys, "check-epi", "--phi", "aa,b", "--q", "2")
    assert code == 1 and doc["result"]["snf_diagonal"][-1] != 1
    code, doc = run_json(capsys, "homrep", "--phi", "ab,b", "--q", "2")
    assert code == 0 and abs(doc["result"]["det"]) == 1


def test_tower_and_separate(capsys):
    code, doc = run_json(capsys, "tower", "--n", "2", "--q", "2")
    assert [lv["degree"] for lv in doc["result"]["towers"][0]["levels"]] == [4, 128]
    code, doc = run_json(capsys, "separate", "ABab", "--q", "2")
    assert code == 0 and doc["result"]["results"][0]["level"] == 2
    code, doc = run_json(capsys, "separate", "ABab", "--q", "3", "--depth", "1")
    assert code == 1


def test_nilpotent(capsys):
    code, doc = run_json(capsys, "nilpotent", "--phi", "aabbABabaBBAA,b")
    assert code == 0 and all(doc["result"]["epi"].values())
    code, doc = run_json(capsys, "nilpotent", "--word", "ABab", "--nilpotent-cap", "2")
    assert doc["result"]["magnus"] == "1 + X1X2 - X2X1"
    code, _ = run_json(capsys, "nilpotent", "--phi", "aa,b")
    assert code == 1


def test_whitehead(capsys):
    code, doc = run_json(capsys, "whitehead", "aabbABabaBBAAb", "--reduce")
    assert code == 0 and doc["result"]["reduction"]["minimal_length"] == 14
    code, doc = run_json(capsys, "whitehead", "ab")
    assert code == 1


def test_surface(capsys):
    code, doc = run_json(capsys, "surface", "info", "--rotation", "a b A B", "--q", "2", "--depth", "1")
    assert [c["genus"] for c in doc["result"]["covers"]] == [1, 1]
    code, doc = run_json(capsys, "surface", "disjoint", "--rotation", "a b A B", "--x", "a", "--y", "b")
    assert code == 0
    code, doc = run_json(capsys, "surface", "preserves", "--rotation", "a b A B", "--phi", "A,b",
                         "--q", "2", "--depth", "1")
    assert code == 1 and doc["result"]["verdict"] == "fail"


def test_witness_5(capsys):
    code, doc = run_json(capsys, "witness-5", "--q", "2", "--depth", "1")
    assert code == 0 and doc["result"]["holds"]


@pytest.mark.parametrize("argv,flag", [
    (["certify", "--phi", "a#b"], "--phi"),
    (["tower", "--q", "1"], "--q"),
    (["tower", "--depth", "0"], "--depth"),
    (["deck", "--element", "05", "--q", "2"], "--element"),
    (["deck", "--element", "01", "--output", "dot"], "--output"),
    (["nilpotent", "--phi", "ab,b", "--nilpotent-cap", "9"], "--nilpotent-cap"),
    (["surface", "info", "--rotation", "a b A"], "--rotation"),
    (["surface", "preserves", "--rotation", "a b A B", "--phi", "aa,b"], "--phi"),
    (["cover", "--n", "2", "--q", "3", "--level", "2", "--max-vertices", "100"], "--max-vertices"),
])
def test_input_errors_name_the_flag(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert flag in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["deck"])
    assert exc.value.code == 2
    assert "--element" in capsys.readouterr().err


def test_env_budget(capsys, monkeypatch):
    monkeypatch.setenv("FREECOVER_MAX_VERTICES", "50")
    code, doc = run_json(capsys, "tower", "--q", "2")
    assert doc["config"]["max_vertices"] == 50
    assert len(doc["result"]["towers"][0]["levels"]) == 1
    monkeypatch.setenv("FREECOVER_MAX_VERTICES", "many")
    code, _, err = run(capsys, "tower")
    assert code == 2 and "FREECOVER_MAX_VERTICES" in err


def test_byte_identical(capsys):
    argv = ["certify", "--phi", "aabbABabaBBAA,b", "--seed", "7"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_text_output(capsys):
    code, out, _ = run(capsys, "deck", "--element", "01", "--q", "2", "--output", "text")
    assert "trace: 1" in out
