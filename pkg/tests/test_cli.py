import json

import pytest
from click.testing import CliRunner

from sfasat.commands import cli
from sfasat.core.logging import setup_logging
from tests.conftest import FIXTURES

THREE_REGIONS = "|A & B| = 1 & |A & ~B| = 1 & |~A & B| = 1"


@pytest.fixture
def runner():
    yield CliRunner()
    # the command replaced the stderr sink with the runner's stream
    setup_logging()


def fixture(name: str) -> str:
    return str(FIXTURES / name)


class TestCheckCommand:
    def test_sat(self, runner):
        result = runner.invoke(cli, ["check", fixture("odd_pos.sfa")])
        assert result.exit_code == 0
        assert result.stdout == "SAT\n"

    def test_unsat(self, runner):
        result = runner.invoke(cli, ["check", fixture("unsat_guard.sfa")])
        assert result.exit_code == 1
        assert result.stdout == "UNSAT\n"

    def test_witness_with_constraint(self, runner):
        result = runner.invoke(cli, ["check", "--witness", fixture("odd_pos_card2.sfa")])
        assert result.exit_code == 0
        assert result.stdout == "SAT\nwitness=[1,1]\n"

    def test_json_record(self, runner):
        result = runner.invoke(cli, ["check", "--json", fixture("bv_example.sfa")])
        lines = result.stdout.splitlines()
        assert lines[0] == "SAT"
        report = json.loads(lines[-1])
        assert report["status"] == "SAT"
        assert report["method"] == "decomp"
        assert report["witness"] == [6]
        assert report["letters"][0]["witness"] == 6

    def test_prune(self, runner):
        result = runner.invoke(cli, ["check", "--method", "prune", "--witness", fixture("bv_example.sfa")])
        assert result.exit_code == 0
        assert result.stdout == "SAT\nwitness=[6]\n"

    def test_prune_rejects_constraints(self, runner):
        result = runner.invoke(cli, ["check", "--method", "prune", fixture("odd_pos_card2.sfa")])
        assert result.exit_code == 2
        assert "error:" in result.stderr

    def test_brute(self, runner):
        result = runner.invoke(
            cli, ["check", "--method", "brute", "--brute-dom=1..2", "--brute-len", "3", "--witness", fixture("odd_pos_card2.sfa")]
        )
        assert result.exit_code == 0
        assert result.stdout == "SAT\nwitness=[1,1]\n"

    def test_brute_unsat_within_bounds(self, runner):
        result = runner.invoke(cli, ["check", "--method", "brute", "--brute-dom=-2..3", fixture("unsat_guard.sfa")])
        assert result.exit_code == 1
        assert result.stdout == "UNSAT\n"

    def test_bad_domain(self, runner):
        result = runner.invoke(cli, ["check", "--method", "brute", "--brute-dom=5..1", fixture("odd_pos.sfa")])
        assert result.exit_code == 2

    def test_missing_file(self, runner):
        result = runner.invoke(cli, ["check", fixture("missing.sfa")])
        assert result.exit_code == 2

    def test_parse_error(self, runner, tmp_path):
        path = tmp_path / "broken.sfa"
        path.write_text("algebra lia\nstates q0\ninitial q0\ntrans q0 q0 (nope)\n", encoding="utf-8")
        result = runner.invoke(cli, ["check", str(path)])
        assert result.exit_code == 2
        assert "line 4" in result.stderr

    def test_deterministic(self, runner):
        args = ["check", "--witness", "--json", fixture("odd_pos_card2.sfa")]
        assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout

    def test_log_level_keeps_stdout_clean(self, runner):
        result = runner.invoke(cli, ["--log-level", "debug", "check", fixture("odd_pos.sfa")])
        assert result.stdout == "SAT\n"


class TestParikhCommand:
    def test_prints_the_formula(self, runner):
        result = runner.invoke(cli, ["parikh", fixture("odd_pos.sfa")])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0].startswith("# k1 counts ")
        assert lines[1].startswith("# nodes ")
        assert "k1" in lines[2]


class TestQfbapaCommand:
    def test_sat(self, runner):
        result = runner.invoke(cli, ["qfbapa", "|A| = 2 & |U| = 2"])
        assert result.exit_code == 0
        assert result.stdout == "SAT\nuniverse=2\nA={1,2}\n"

    def test_integer_variables(self, runner):
        result = runner.invoke(cli, ["qfbapa", "|A| = n & n = 3 & |U| = 3"])
        assert result.exit_code == 0
        assert "n=3" in result.stdout.splitlines()

    def test_unsat(self, runner):
        result = runner.invoke(cli, ["qfbapa", "|A| = 3 & A sub B & |B| = 2"])
        assert result.exit_code == 1
        assert result.stdout == "UNSAT\n"

    def test_certificate(self, runner):
        result = runner.invoke(cli, ["qfbapa", "--certificate", THREE_REGIONS])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[-1] == "certificate={01,10,11}"

    def test_json(self, runner):
        result = runner.invoke(cli, ["qfbapa", "--json", THREE_REGIONS])
        report = json.loads(result.stdout.splitlines()[-1])
        assert report["status"] == "SAT"
        assert report["certificate"]["regions"] == ["01", "10", "11"]
        assert report["sparsity_bound"] >= 3

    def test_parse_error(self, runner):
        result = runner.invoke(cli, ["qfbapa", "|A| ="])
        assert result.exit_code == 2
        assert "error:" in result.stderr


@pytest.mark.slow
def test_selftest_passes(runner):
    result = runner.invoke(cli, ["selftest", "--scale", "0.02"])
    assert result.exit_code == 0
    assert all(line.endswith("ok") for line in result.stdout.splitlines())
