import json
import subprocess
import sys

import pytest

from epispace import assignments as asg
from epispace import operators as ops
from epispace.cli import OK, SCALE, USAGE, VIOLATED, run
from epispace.space import load_space


@pytest.fixture(scope="module")
def fixtures(tmp_path_factory):
    d = tmp_path_factory.mktemp("ex")
    assert run(["examples", "--dir", str(d)]) == OK
    return d


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExamples:
    def test_files_reproduce_fixtures(self, fixtures):
        sp1, op1 = ops.build_example1()
        sp2, op2 = ops.build_example2()
        assert load_space(fixtures / "ex1.space") == sp1
        assert ops.load_operator(fixtures / "ex1.op", sp1) == op1
        assert load_space(fixtures / "ex2.space") == sp2
        assert ops.load_operator(fixtures / "ex2.op", sp2) == op2
        assert asg.load_assignment(fixtures / "ex2.assign", sp2) == asg.example2_assignment(sp2)
        assert load_space(fixtures / "gc3.space") == ops.consistent_space()


class TestCommands:
    def test_eval(self, capsys, fixtures):
        code, out, _ = call(capsys, "eval", "-s", fixtures / "ex2.space", "-f", "!a <-> b")
        assert code == OK
        assert out.strip() == "{-ab, a-b}"

    def test_eval_unknown_atom(self, capsys, fixtures):
        code, _, err = call(capsys, "eval", "-s", fixtures / "ex2.space", "-f", "a & c")
        assert code == USAGE
        assert "unknown atom 'c'" in err

    def test_check_cl3(self, capsys, fixtures):
        code, out, _ = call(capsys, "check", "-s", fixtures / "ex1.space", "-o", fixtures / "ex1.op", "-p", "CL3")
        assert code == VIOLATED
        assert out.strip() == "CL3: violated at (PsiA, {-a})"

    def test_check_passing(self, capsys, fixtures):
        argv = ["check", "-s", fixtures / "ex2.space", "-o", fixtures / "ex2.op"]
        for p in ("ECL1", "ECL2", "ECL3", "ECL4", "ECL5", "ECL6", "ECL7"):
            argv += ["-p", p]
        code, out, _ = call(capsys, *argv)
        assert code == OK
        assert len(out.splitlines()) == 7

    def test_check_unknown_postulate(self, capsys, fixtures):
        code, _, _ = call(capsys, "check", "-s", fixtures / "ex1.space", "-o", fixtures / "ex1.op", "-p", "Z9")
        assert code == USAGE

    def test_classify_json(self, capsys, fixtures):
        code, out, _ = call(capsys, "classify", "--json", "-s", fixtures / "ex2.space", "-o", fixtures / "ex2.op")
        assert code == OK
        assert json.loads(out) == {"in_AGMRev": False, "in_CLRev": False, "in_ECLRev": True}

    def test_synthesize_and_extract(self, capsys, fixtures, tmp_path):
        out_op = tmp_path / "s.op"
        code, _, _ = call(capsys, "synthesize", "-s", fixtures / "ex2.space", "-a", fixtures / "ex2.assign",
                          "--out", out_op)
        assert code == OK
        assert out_op.read_text() == (fixtures / "ex2.op").read_text()
        code, out, _ = call(capsys, "extract", "-s", fixtures / "ex2.space", "-o", out_op)
        assert code == OK
        assert out == (fixtures / "ex2.assign").read_text()

    def test_extract_failure(self, capsys, fixtures):
        code, _, err = call(capsys, "extract", "-s", fixtures / "ex1.space", "-o", fixtures / "ex1.op")
        assert code == VIOLATED
        assert "extraction failed" in err

    def test_roundtrip(self, capsys, fixtures):
        code, out, _ = call(capsys, "roundtrip", "-s", fixtures / "ex2.space", "-o", fixtures / "ex2.op")
        assert code == OK
        assert "tables identical" in out

    def test_verify(self, capsys, fixtures):
        code, out, _ = call(capsys, "verify", "--json", "-s", fixtures / "ex1.space")
        assert code == OK
        assert json.loads(out)["class_counts"]["CLRev"] == 0

    def test_verify_too_large(self, capsys, fixtures):
        code, _, err = call(capsys, "verify", "-s", fixtures / "ex2.space")
        assert code == SCALE
        assert "scale exceeded" in err

    def test_enumerate_count(self, capsys, fixtures):
        code, out, _ = call(capsys, "enumerate", "--json", "--count-only", "-s", fixtures / "ex1.space")
        assert code == OK
        d = json.loads(out)
        assert d["operator_count"] == 256 and d["assignment_count"] == 27

    def test_dot(self, capsys, fixtures):
        code, out, _ = call(capsys, "dot", "-s", fixtures / "ex1.space", "-o", fixtures / "ex1.op")
        assert code == OK
        assert out.startswith('digraph "ex1"')

    def test_bad_file(self, capsys, tmp_path, fixtures):
        bad = tmp_path / "bad.op"
        bad.write_text("op for ex1\nrow PsiA input: z -> PsiA\n")
        code, _, err = call(capsys, "dot", "-s", fixtures / "ex1.space", "-o", bad)
        assert code == USAGE
        assert "bad.op:2" in err and "'z'" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = call(capsys, "eval", "-s", tmp_path / "nope.space", "-f", "a")
        assert code == USAGE

    def test_argparse_errors(self, capsys):
        assert run(["frobnicate"]) == USAGE
        assert run([]) == USAGE
        capsys.readouterr()


def test_json_is_deterministic(fixtures):
    argv = [sys.executable, "-m", "epispace.cli", "verify", "--json", "-s", str(fixtures / "ex1.space")]
    a = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    assert a == b
