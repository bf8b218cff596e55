"""Tests for the ``fomod`` command line, run in-process through ``fomod.cli.app.run``."""
import io

import pytest

from fomod.cli.app import run
from fomod.config import ExitCode
from fomod.reports import CounterexampleReport, FormulaReport, NumberReport, load_certificate, load_payload

LOOP_FILE = """\
signature E/2
structure L {
  universe 1
  E = {(0,0)}
}
"""

TWO_FILE = """\
signature E/2
structure A {
  universe 2
  E = {(0,1)}
}
structure B {
  universe 2
  E = {(0,1), (1,0)}
}
"""


@pytest.fixture
def loop_file(tmp_path):
    path = tmp_path / "loop.txt"
    path.write_text(LOOP_FILE)
    return str(path)


@pytest.fixture
def two_file(tmp_path):
    path = tmp_path / "two.txt"
    path.write_text(TWO_FILE)
    return str(path)


# ============================================================================
# Evaluation and equivalence
# ============================================================================


class TestEvalCommand:
    """Test suite for ``fomod eval``."""

    def test_true_sentence(self, loop_file, capsys):
        """Test that a satisfied sentence prints true and exits 0."""
        assert run(["eval", "--structure", loop_file, "--formula", "E x. E(x,x)"]) == ExitCode.OK
        assert capsys.readouterr().out.strip() == "true"

    def test_false_sentence(self, loop_file, capsys):
        """Test that a falsified sentence prints false and exits 1."""
        assert run(["eval", "--structure", loop_file, "--formula", "A x. !E(x,x)"]) == ExitCode.FALSE
        assert capsys.readouterr().out.strip() == "false"

    def test_several_structures(self, two_file, capsys):
        """Test one line per structure when a file holds more than one."""
        code = run(["eval", "--structure", two_file, "--formula", "E x. E y. (E(x,y) & E(y,x))"])
        assert code == ExitCode.FALSE
        assert capsys.readouterr().out.splitlines() == ["A: false", "B: true"]

    def test_assignment(self, two_file, capsys):
        """Test free variables given with --assign."""
        code = run(["eval", "--structure", two_file, "--formula", "E(x,y)", "--assign", "x=0,y=1"])
        assert code == ExitCode.OK

    def test_structure_from_stdin(self, monkeypatch, capsys):
        """Test that '-' reads the structure from stdin."""
        monkeypatch.setattr("sys.stdin", io.StringIO(LOOP_FILE))
        assert run(["eval", "--structure", "-", "--formula", "E x. E(x,x)"]) == ExitCode.OK

    def test_formula_from_file(self, loop_file, tmp_path, capsys):
        """Test that @path reads the formula from a file."""
        source = tmp_path / "phi.txt"
        source.write_text("E x. E(x,x)\n")
        assert run(["eval", "--structure", loop_file, "--formula", f"@{source}"]) == ExitCode.OK


class TestEquivCommand:
    """Test suite for ``fomod equiv``."""

    def test_counterexample_is_printed(self, capsys):
        """Test that 'there is a loop' and 'false' differ on a one-element loop."""
        code = run(["equiv", "--cap", "2", "--phi", "E x. E(x,x)", "--psi", "false"])
        assert code == ExitCode.FALSE
        out = capsys.readouterr().out
        assert "structure counterexample {" in out
        assert "universe 1" in out

    def test_equivalent_sentences(self, capsys):
        """Test that equivalent sentences exit 0."""
        code = run(["equiv", "--cap", "2", "--phi", "A x. E(x,x)", "--psi", "!E x. !E(x,x)", "--up-to-iso"])
        assert code == ExitCode.OK
        assert capsys.readouterr().out.startswith("equivalent on")

    def test_json_output(self, capsys):
        """Test that --emit json prints a counterexample payload."""
        run(["equiv", "--cap", "2", "--phi", "E x. E(x,x)", "--psi", "false", "--emit", "json"])
        report = load_payload(capsys.readouterr().out)
        assert isinstance(report, CounterexampleReport)
        assert report.found
        assert report.counterexample.relations == {"E": [[0, 0]]}


# ============================================================================
# Exit codes
# ============================================================================


class TestExitCodes:
    """Test suite for the mapping of errors onto exit codes."""

    def test_parse_error(self, loop_file, capsys):
        """Test that a malformed formula exits 2 with a message on stderr."""
        assert run(["eval", "--structure", loop_file, "--formula", "E x. E(x"]) == ExitCode.USAGE
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "error" in captured.err

    def test_unknown_relation(self, loop_file, capsys):
        """Test that a relation outside the signature is a usage error."""
        assert run(["eval", "--structure", loop_file, "--formula", "E x. R(x)"]) == ExitCode.USAGE

    def test_missing_file(self, tmp_path, capsys):
        """Test that an unreadable structure file is a usage error."""
        missing = str(tmp_path / "absent.txt")
        assert run(["eval", "--structure", missing, "--formula", "true"]) == ExitCode.USAGE

    def test_missing_option(self, capsys):
        """Test that click's own usage errors exit 2."""
        assert run(["equiv", "--phi", "true", "--psi", "true"]) == ExitCode.USAGE

    def test_budget_exhausted(self, capsys):
        """Test that a tiny step budget exits 3."""
        code = run(["--budget", "1", "equiv", "--cap", "3", "--phi", "A x. x=x", "--psi", "true"])
        assert code == ExitCode.RESOURCE
        assert "out of budget" in capsys.readouterr().err

    def test_negative_budget(self, capsys):
        """Test that the budget must be non-negative."""
        assert run(["--budget", "-1", "equiv", "--cap", "1", "--phi", "true", "--psi", "true"]) == ExitCode.USAGE

    def test_unbounded_budget(self, capsys):
        """Test that --budget 0 lifts the limit."""
        code = run(["--budget", "0", "equiv", "--cap", "2", "--phi", "A x. x=x", "--psi", "true"])
        assert code == ExitCode.OK


# ============================================================================
# Tree encodings
# ============================================================================


class TestTreeCommands:
    """Test suite for ``encode-tree``, ``decode-tree`` and ``gen-formula``."""

    def test_round_trip_through_stdin(self, monkeypatch, capsys):
        """Test that decode-tree reads back what encode-tree printed."""
        assert run(["encode-tree", "--h", "0", "--i", "5"]) == ExitCode.OK
        encoded = capsys.readouterr().out
        monkeypatch.setattr("sys.stdin", io.StringIO(encoded))
        assert run(["decode-tree", "--h", "0"]) == ExitCode.OK
        assert capsys.readouterr().out.strip() == "5"

    def test_negative_parameter(self, tmp_path, capsys):
        """Test a forest of base shapes, with the negative parameter written as --h=-1."""
        assert run(["encode-tree", "--h=-1", "--values", "3,0,2"]) == ExitCode.OK
        path = tmp_path / "forest.txt"
        path.write_text(capsys.readouterr().out)
        assert run(["decode-tree", "--h=-1", "--structure", str(path), "--emit", "json"]) == ExitCode.OK
        report = load_payload(capsys.readouterr().out)
        assert isinstance(report, NumberReport)
        assert report.values == [3, 0, 2]

    def test_undecodable_root(self, tmp_path, capsys):
        """Test that a root which is no encoding prints none and exits 1."""
        run(["encode-tree", "--h", "0", "--i", "2"])
        path = tmp_path / "tree.txt"
        path.write_text(capsys.readouterr().out)
        assert run(["decode-tree", "--h=-1", "--structure", str(path)]) == ExitCode.FALSE
        assert capsys.readouterr().out.strip() == "none"

    def test_out_of_range(self, capsys):
        """Test that a number beyond Tower(h+3)-1 is refused."""
        assert run(["encode-tree", "--h", "0", "--i", "16"]) == ExitCode.USAGE

    def test_needs_exactly_one_input(self, capsys):
        """Test that --i and --values exclude each other."""
        assert run(["encode-tree", "--h", "0", "--i", "1", "--values", "1,2"]) == ExitCode.USAGE

    def test_gen_formula(self, capsys):
        """Test the formula families and their JSON payload."""
        assert run(["gen-formula", "dist-le", "--d", "1"]) == ExitCode.OK
        assert capsys.readouterr().out.strip() == "(x=y | E(x,y))"
        assert run(["gen-formula", "eq", "--h=-1", "--emit", "json"]) == ExitCode.OK
        report = load_payload(capsys.readouterr().out)
        assert isinstance(report, FormulaReport)
        assert report.size > 0
        assert run(["gen-formula", "enc"]) == ExitCode.USAGE


class TestFixturesCommand:
    """Test suite for ``fomod fixtures``."""

    def test_path(self, capsys):
        """Test the coloured path P_3."""
        assert run(["fixtures", "path", "--n", "3"]) == ExitCode.OK
        out = capsys.readouterr().out
        assert "universe 3" in out
        assert "G = {0, 2}" in out

    def test_witness_premise(self, capsys):
        """Test the decomposition witnesses with the premise check."""
        assert run(["fixtures", "fv-witnesses", "--h=-1", "--H", "2", "--check-premise"]) == ExitCode.OK
        out = capsys.readouterr().out
        assert "structure A_3 {" in out
        assert "# premise holds: true" in out


# ============================================================================
# Hanf normal form
# ============================================================================


def test_hnf_saves_its_certificate(tmp_path, capsys):
    """Test that --save-certificate writes a readable certificate."""
    target = tmp_path / "cert"
    code = run(
        ["hnf", "--formula", "E x. E(x,x)", "--witness-cap", "2", "--save-certificate", "--certificate-dir", str(target)]
    )
    assert code == ExitCode.OK
    assert load_certificate(target).witness_cap == 2
    assert "certificate written to" in capsys.readouterr().err
