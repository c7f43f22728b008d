import json

import pytest

from cuntzcalc.cli import main
from cuntzcalc.decide import build_overlap_graph, export_dot
from cuntzcalc.endo import sum_of_words_profile
from cuntzcalc.exprio import resolve

W0 = "S1 S11* + S21 S12* + S22 S2*"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- arithmetic commands -----------------------------------------------------

def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", "S11 S21* + S12 S22*")
    assert code == 0
    assert out.strip() == "S1 S2*"


def test_normalize_drops_zero_terms(capsys):
    code, out, _ = run(capsys, "normalize", "I + 0 S1")
    assert code == 0 and out.strip() == "I"
    code, out, _ = run(capsys, "normalize", "S1 - S1")
    assert code == 0 and out.strip() == "0"


def test_mul_chain(capsys):
    code, out, _ = run(capsys, "mul", "S1*", "S1", "S2 S2*")
    assert code == 0
    assert out.strip() == "S2 S2*"
    code, out, _ = run(capsys, "mul", "S1 S1*", "S2 S2*")
    assert code == 0
    assert out.strip() == "0"


def test_adjoint(capsys):
    code, out, _ = run(capsys, "adjoint", "2 g^1 S12")
    assert code == 0
    assert out.strip() == "2 g^-1 S12*"


def test_eq_exit_codes(capsys):
    code, out, _ = run(capsys, "eq", "S1 S1* + S2 S2*", "I")
    assert (code, out.strip()) == (0, "EQUAL")
    code, out, _ = run(capsys, "eq", "S1", "S2")
    assert (code, out.strip()) == (1, "DIFFERENT")


def test_unitary(capsys):
    assert run(capsys, "unitary", "@w_cp")[0] == 0
    code, out, _ = run(capsys, "unitary", "S1")
    assert code == 1 and "NOT UNITARY" in out


def test_member(capsys):
    assert run(capsys, "member", "S1 S2*", "--in", "F")[0] == 0
    assert run(capsys, "member", "@w_cp", "--in", "F")[0] == 1
    assert run(capsys, "member", "@u_cp", "--in", "Fk", "--level", "4")[0] == 0
    assert run(capsys, "member", "@u_cp", "--in", "Fk", "--level", "3")[0] == 1
    code, _, err = run(capsys, "member", "I", "--in", "Fk")
    assert code == 3 and "--level" in err


def test_lambda(capsys):
    code, out, _ = run(capsys, "lambda", "--u", "S2 S1* + S1 S2*", "S1")
    assert code == 0
    assert out.strip() == "S2"


def test_n_flag(capsys):
    assert run(capsys, "normalize", "--n", "3", "S3")[0] == 0
    assert run(capsys, "normalize", "S3")[0] == 3
    assert run(capsys, "normalize", "--n", "1", "S1")[0] == 3


# -- decision commands -------------------------------------------------------

def test_preserves_uhf_verdict_codes(capsys):
    code, out, _ = run(capsys, "preserves-uhf", "--w", "@w_cp")
    assert code == 0
    assert "verdict: PRESERVES" in out
    assert "method: graph" in out
    code, out, _ = run(capsys, "preserves-uhf", "--w", W0)
    assert code == 1
    assert "failing level: 1" in out
    assert "witness: S1 S2*" in out
    code, out, _ = run(capsys, "preserves-uhf", "--w", "@w_cp",
                       "--method", "direct", "--depth", "2")
    assert code == 2
    assert "verdict: UNDECIDED" in out


def test_preserves_uhf_json(capsys):
    code, out, _ = run(capsys, "preserves-uhf", "--json", "--w", W0)
    assert code == 1
    doc = json.loads(out)
    assert doc["verdict"] == "NOT_PRESERVES"
    assert doc["failing_level"] == 1
    assert doc["witness"] == "S1 S2*"
    assert doc["certificate"]["defect_block"]


def test_cocycles(capsys):
    code, out, _ = run(capsys, "cocycles", "--w", "@w_cp", "--k", "8")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("z~(1) = ")
    assert lines[4] == "z~(5) = I"
    assert lines[5] == "state repetition: accumulated stream, start 0, period 5"
    code, out, _ = run(capsys, "cocycles", "--w", W0, "--k", "3")
    assert code == 1
    assert "leaves the shift's range at level 1" in out


def test_graph_output(capsys, tmp_path):
    dot_path = tmp_path / "overlap.dot"
    code, out, _ = run(capsys, "graph", "--w", "@w_cp", "--dot", str(dot_path))
    assert code == 0
    assert "classes (6):" in out
    assert "11: label +1" in out
    assert "211: label -1" in out
    assert "22: label 0" in out
    assert "edges (7):" in out
    assert "path condition: HOLDS" in out
    expected = export_dot(build_overlap_graph(sum_of_words_profile(resolve("@w_cp"))))
    assert dot_path.read_text() == expected


def test_graph_refusals(capsys):
    code, out, _ = run(capsys, "graph", "--w", "@v_cp")
    assert code == 1
    assert "not well defined" in out
    code, _, err = run(capsys, "graph", "--w",
                       "S111 S1* + S112 S21* + S12 S221* + S2 S222*")
    assert code == 3
    assert "degrees" in err


def test_graph_path_failure_exit(capsys):
    code, out, _ = run(capsys, "graph", "--w",
                       "S11 S111* + S121 S112* + S122 S12* + S21 S211* "
                       "+ S221 S212* + S222 S22*")
    # shift of w0: well-formed graph whose path condition fails
    assert code == 1
    assert "path condition: FAILS" in out


# -- intertwiner commands ----------------------------------------------------

def test_intertwiner_check(capsys):
    code, out, _ = run(capsys, "intertwiner", "--u", "@u_cp", "--check", "@v_cp")
    assert code == 0 and "SELF-INTERTWINER" in out
    code, out, _ = run(capsys, "intertwiner", "--u", "@u_cp", "--check", "S1 S2* + S2 S1*")
    assert code == 1 and "NOT A SELF-INTERTWINER" in out


def test_intertwiner_basis(capsys):
    code, out, _ = run(capsys, "intertwiner", "--u", "@u_cp", "--level", "0")
    assert code == 0
    assert "dimension: 1" in out
    assert "basis[0] (core): I" in out
    code, _, _ = run(capsys, "intertwiner", "--u", "@u_cp", "--check", "x", "--level", "1")
    assert code == 3  # mutually exclusive flags


def test_perturb(capsys):
    code, out, _ = run(capsys, "perturb", "--u", "@u_cp", "--v", "@v_cp")
    assert code == 0
    assert resolve(out.strip()) == resolve("@w_cp")
    code, _, err = run(capsys, "perturb", "--u", "@u_cp", "--v", "S1 S2* + S2 S1*")
    assert code == 1
    assert "precondition failed" in err


def test_agree(capsys):
    code, out, _ = run(capsys, "agree", "--v", "@u_cp", "--w", "@w_cp", "--depth", "3")
    assert code == 0 and "AGREE" in out
    code, out, _ = run(capsys, "agree", "--v", "S2 S1* + S1 S2*", "--w", "I", "--depth", "2")
    assert code == 1 and "DISAGREE at level 1" in out


# -- verification and search -------------------------------------------------

def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify-examples")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "all claims pass"
    assert len([ln for ln in lines if ln.startswith("PASS")]) == len(lines) - 1


def test_search_exhaustive_k1(capsys):
    code, out, _ = run(capsys, "search", "--k", "1")
    assert code == 0
    assert "candidates: 2" in out


def test_search_sampled_is_deterministic(capsys):
    args = ("search", "--k", "2", "--samples", "6", "--seed", "5")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_search_guardrails(capsys):
    code, _, err = run(capsys, "search", "--k", "4")
    assert code == 3
    assert "--samples" in err


# -- error mapping -----------------------------------------------------------

def test_usage_errors_exit_3(capsys):
    assert run(capsys, "nonsense")[0] == 3
    assert run(capsys, "normalize", "S1 +")[0] == 3
    assert run(capsys, "normalize", "@nope")[0] == 3
    assert run(capsys, "preserves-uhf", "--w", "@w_cp", "--method", "psychic")[0] == 3
    assert run(capsys, "eq", "S1")[0] == 3
