"""
Tests for the CLI module.
"""

import csv
import os
import shutil
import tempfile
from typing import Any
from unittest.mock import patch

import pytest

from minorforge.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from minorforge.models import CSV_COLUMNS, Defaults


def run_cli(*argv: str) -> Any:
    """Run main() and return the exit code."""
    with pytest.raises(SystemExit) as excinfo:
        main(list(argv))
    return excinfo.value.code


class TestCLI:
    """Test cases for CLI functionality."""

    def setup_method(self) -> None:
        """Set up test environment."""
        self.test_dir = tempfile.mkdtemp(prefix="cli_test_")
        self.env_patcher = patch.dict(os.environ, {}, clear=False)
        self.env_patcher.start()
        os.environ.pop(Defaults.SEED_ENV, None)

    def teardown_method(self) -> None:
        """Clean up test environment."""
        self.env_patcher.stop()
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def path(self, name: str) -> str:
        """Path inside the scratch directory."""
        return os.path.join(self.test_dir, name)

    def read(self, name: str) -> str:
        """Contents of a scratch file."""
        with open(self.path(name), encoding="utf-8") as f:
            return f.read()

    def test_cli_help_message(self) -> None:
        """Help exits cleanly."""
        assert run_cli("--help") == 0

    def test_cli_missing_command(self) -> None:
        """A subcommand is required."""
        assert run_cli() == 2

    def test_sample_is_reproducible(self, capsys: Any) -> None:
        """Same seed, byte-identical graph files."""
        for name in ["a.txt", "b.txt"]:
            code = run_cli(
                "sample", "hm", "--n", "1000", "--seed", "7",
                "--out", self.path(name),
            )
            assert code == EXIT_OK
        assert self.read("a.txt") == self.read("b.txt")
        assert self.read("a.txt").startswith("1000 1500\n")
        assert "in_xrange_window=" in capsys.readouterr().out

    def test_sample_to_stdout(self, capsys: Any) -> None:
        """Graph on stdout, diagnostics on stderr."""
        assert run_cli("sample", "gstar", "--n", "10", "--seed", "1") == EXIT_OK
        captured = capsys.readouterr()
        assert captured.out.startswith("10 15\n")
        assert len(captured.out.splitlines()) == 16
        assert "model=gstar" in captured.err

    def test_sample_odd_degree_sum(self, capsys: Any) -> None:
        """rn odd is a usage error."""
        assert run_cli("sample", "gsimple", "--n", "9", "--r", "3") == EXIT_USAGE
        assert "rn must be even" in capsys.readouterr().err

    def test_sample_gnm_without_edges(self) -> None:
        """m = 0 gives only the header line."""
        code = run_cli(
            "sample", "gnm", "--n", "100", "--m", "0",
            "--out", self.path("g.txt"),
        )
        assert code == EXIT_OK
        assert self.read("g.txt") == "100 0\n"

    def test_seed_environment_override(self) -> None:
        """MINORFORGE_SEED beats --seed."""
        assert run_cli(
            "sample", "gnp", "--n", "60", "--p", "0.1", "--seed", "5",
            "--out", self.path("flag.txt"),
        ) == EXIT_OK
        os.environ[Defaults.SEED_ENV] = "5"
        assert run_cli(
            "sample", "gnp", "--n", "60", "--p", "0.1", "--seed", "99",
            "--out", self.path("env.txt"),
        ) == EXIT_OK
        assert self.read("flag.txt") == self.read("env.txt")

    def test_minor_infeasible_exits_nonzero(self, capsys: Any) -> None:
        """An infeasible faithful trial still writes its row."""
        code = run_cli(
            "minor", "--n", "16", "--mode", "faithful", "--no-progress"
        )
        assert code == EXIT_FAILURE
        captured = capsys.readouterr()
        rows = list(csv.DictReader(captured.out.splitlines()))
        assert len(rows) == 1
        assert rows[0]["status"] == "infeasible"
        assert "infeasible" in captured.err

    def test_minor_odd_n(self) -> None:
        """Odd n is a usage error."""
        assert run_cli("minor", "--n", "15", "--no-progress") == EXIT_USAGE

    def test_phase_writes_csv(self, capsys: Any) -> None:
        """One row per trial plus the summary block."""
        out = self.path("phase.csv")
        code = run_cli(
            "phase", "--n", "300", "--lambda", "1", "--trials", "2",
            "--no-progress", "--out", out,
        )
        assert code == EXIT_OK
        with open(out, encoding="utf-8") as f:
            rows = list(csv.reader(f))
        assert rows[0] == list(CSV_COLUMNS)
        assert [row[2] for row in rows[1:]] == ["0", "1"]
        stdout = capsys.readouterr().out
        assert "Wrote 2 row(s)" in stdout
        assert "lambda=1: trials=2" in stdout
        assert "K3 floor" in stdout

    def test_phase_slack_breach_exits_nonzero(self, capsys: Any) -> None:
        """An in-window row above the slack bound fails the command."""
        row = {
            "param": "lambda_bar=3", "trials": 1, "l1_excess": 140.0,
            "kernel_order": 280.0, "ccl_lower": 9.0, "ccl_upper": 70.0,
            "binomial_lambda": 6.0, "slack_bound": 61.79, "in_window": True,
            "violations": [0],
        }
        with patch(
            "minorforge.manager.ExperimentManager.phase_summary",
            return_value=[row],
        ):
            code = run_cli(
                "phase", "--n", "300", "--lambda", "1", "--trials", "1",
                "--no-progress", "--out", self.path("phase.csv"),
            )
        assert code == EXIT_FAILURE
        stdout = capsys.readouterr().out
        assert "at lambda=6" in stdout
        assert "above the slack rule in trial(s) 0" in stdout

    def test_phase_needs_window_values(self) -> None:
        """Neither --lambda nor --lambda-bar is a usage error."""
        assert run_cli("phase", "--n", "300", "--no-progress") == EXIT_USAGE

    def test_phase_bad_number_list(self) -> None:
        """Unparseable lambda lists are rejected."""
        code = run_cli("phase", "--n", "300", "--lambda", "1,x", "--no-progress")
        assert code == EXIT_USAGE

    def test_oracle_small(self, capsys: Any) -> None:
        """The oracle regression passes for tiny graphs."""
        code = run_cli(
            "oracle", "--max-n", "4", "--oracle-samples", "10",
            "--no-sampler-checks",
        )
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        assert "Violations: 0" in stdout

    def test_keyboard_interrupt(self) -> None:
        """Ctrl-C exits with 130."""

        def interrupted(args: Any, seed: int) -> int:
            raise KeyboardInterrupt

        with patch.dict("minorforge.cli.COMMANDS", {"oracle": interrupted}):
            assert run_cli("oracle") == 130
