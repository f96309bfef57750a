import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

import epimoo.cli as cli
from epimoo.service import app

TINY_ARGS = [
    "--problems", "fda1",
    "--variants", "baseline,e",
]

TINY_FILE = """
problems = fda1
variants = baseline, e
population = 20
generations = 10
runs = 1
t_neighbors = 5
pf_points = 100
"""


@pytest.fixture()
def tiny_config_file(tmp_path):
    path = tmp_path / "tiny.conf"
    path.write_text(TINY_FILE)
    return path


class TestExitCodes:
    def test_bad_flag_is_config_error(self, capsys):
        assert cli.main(["run", "--bogus"]) == 1

    def test_missing_config_file(self, capsys):
        assert cli.main(["run", "--config", "/nonexistent.conf"]) == 1
        assert "config error" in capsys.readouterr().err

    def test_unknown_problem(self, capsys):
        assert cli.main(["run", "--problems", "zdt1", "--dry-run"]) == 1

    def test_report_without_input(self, capsys):
        assert cli.main(["report"]) == 1

    def test_report_missing_dir_is_runtime_error(self, capsys, tmp_path):
        assert cli.main(["report", "--in", str(tmp_path / "void")]) == 2


class TestDryRun:
    def test_paper_protocol(self, capsys):
        assert cli.main(["run", "--preset", "paper", "--dry-run"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["generations"] == 200
        assert body["cycles"] == 2
        assert body["time_step_values"] == [k / 10 for k in range(10)]
        assert body["intervals_per_run"] == 100

    def test_config_file_feeds_dry_run(self, capsys, tiny_config_file):
        assert cli.main(["run", "--config", str(tiny_config_file), "--dry-run"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["generations"] == 10
        assert body["cells"] == 2


class TestRunAndReport:
    def test_run_writes_results_and_summary(self, capsys, tiny_config_file, tmp_path):
        out = tmp_path / "exp"
        assert cli.main(["run", "--config", str(tiny_config_file), "--out", str(out)]) == 0
        assert (out / "manifest.json").exists()
        assert len(list((out / "runs").glob("*.csv"))) == 2
        assert (out / "summary.csv").exists()
        assert "fda1" in capsys.readouterr().out

    def test_report_summary(self, capsys, tiny_config_file, tmp_path):
        out = tmp_path / "exp"
        cli.main(["run", "--config", str(tiny_config_file), "--out", str(out)])
        capsys.readouterr()
        assert cli.main(["report", "--in", str(out)]) == 0
        assert "total %diff" in capsys.readouterr().out

    def test_report_grid(self, capsys, tiny_config_file, tmp_path):
        out = tmp_path / "exp"
        cli.main(["run", "--config", str(tiny_config_file), "--out", str(out)])
        capsys.readouterr()
        assert cli.main(["report", "--in", str(out), "--problem", "fda1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("problem,category,variant,interval")
        assert len(lines) == 6  # header + 5 intervals
        assert (out / "grid_fda1.csv").exists()


class TestListProblems:
    def test_catalog_table(self, capsys):
        assert cli.main(["list-problems"]) == 0
        out = capsys.readouterr().out
        assert len(out.strip().splitlines()) == 17  # header + 16 problems
        assert "fda1" in out and "udf6" in out


class TestServerMode:
    @pytest.fixture(autouse=True)
    def _fake_client(self, monkeypatch):
        monkeypatch.setattr(cli, "_client", lambda server: TestClient(app))
        monkeypatch.setattr(cli, "POLL_SECONDS", 0.05)

    def test_list_problems_remote(self, capsys):
        assert cli.main(["list-problems", "--server", "http://x"]) == 0
        assert "fda1" in capsys.readouterr().out

    def test_run_remote_and_report(self, capsys, tiny_config_file, tmp_path):
        out = tmp_path / "remote"
        code = cli.main(
            ["run", "--config", str(tiny_config_file), "--server", "http://x", "--out", str(out)]
        )
        assert code == 0
        captured = capsys.readouterr()
        assert "total %diff" in captured.out
        assert (out / "manifest.json").exists()

    def test_report_remote_requires_experiment_id(self, capsys):
        assert cli.main(["report", "--server", "http://x"]) == 1
