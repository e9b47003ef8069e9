"""
Command line tests: exit codes and JSON output
"""
import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from dirac_verify import __version__
from dirac_verify.cli import app
from tests.conftest import scenario_dict

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def _config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_version(runner):
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert __version__ in result.stdout


def test_list_checks_json(runner):
    result = runner.invoke(app, ["list-checks", "--json"])
    assert result.exit_code == 0
    ids = [entry["id"] for entry in json.loads(result.stdout)]
    assert "clifford.anticommutation" in ids
    assert "lagrangians.lambda_dm" in ids


def test_list_checks_by_suite(runner):
    result = runner.invoke(app, ["list-checks", "--suite", "pauli", "--json"])
    ids = [entry["id"] for entry in json.loads(result.stdout)]
    assert ids and all(i.startswith("pauli.") for i in ids)


def test_run_empty_check_list_passes(runner, tmp_path):
    config = _config(tmp_path, scenario_dict())
    result = runner.invoke(app, ["run", config, "-o", str(tmp_path / "out"), "--json"])
    assert result.exit_code == 0, result.stderr
    summary = json.loads(result.stdout)
    assert summary["passed"] is True
    scenario = summary["scenarios"][0]
    assert scenario["signature"] == "(2,0,+)"
    assert Path(scenario["reports"]["json"]).exists()
    assert Path(scenario["reports"]["csv"]).exists()


def test_run_passing_check(runner, tmp_path):
    config = _config(tmp_path, scenario_dict(checks=["clifford.chirality"]))
    result = runner.invoke(app, ["run", config, "-o", str(tmp_path), "--json"])
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["scenarios"][0]["counts"]["passed"] == 1


def test_run_failing_check_exits_one(runner, tmp_path):
    data = scenario_dict(checks=["clifford.chirality"], tolerances={"clifford.chirality": -1.0})
    result = runner.invoke(app, ["run", _config(tmp_path, data), "-o", str(tmp_path), "--json"])
    assert result.exit_code == 1
    summary = json.loads(result.stdout)
    assert summary["passed"] is False
    assert summary["scenarios"][0]["counts"]["failed"] == 1


def test_run_check_option_narrows_selection(runner, tmp_path):
    config = _config(tmp_path, scenario_dict(checks=["clifford.*"]))
    result = runner.invoke(app, ["run", config, "-c", "clifford.theta_inverse", "-o", str(tmp_path), "--json"])
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["scenarios"][0]["counts"]["passed"] == 1


def test_run_invalid_json_exits_two(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{", encoding="utf-8")
    result = runner.invoke(app, ["run", str(path), "-o", str(tmp_path)])
    assert result.exit_code == 2
    assert "Invalid JSON" in result.stderr


def test_run_unknown_check_exits_two(runner, tmp_path):
    config = _config(tmp_path, scenario_dict(checks=["clifford.nope"]))
    result = runner.invoke(app, ["run", config, "-o", str(tmp_path)])
    assert result.exit_code == 2
    assert "unknown check 'clifford.nope'" in result.stderr


def test_run_unknown_check_option_exits_two(runner, tmp_path):
    config = _config(tmp_path, scenario_dict())
    result = runner.invoke(app, ["run", config, "--check", "nope.*", "-o", str(tmp_path)])
    assert result.exit_code == 2


def test_coefficients_json(runner, tmp_path):
    result = runner.invoke(app, ["coefficients", "--n-max", "4", "-o", str(tmp_path), "--json"])
    assert result.exit_code == 0, result.stderr
    rows = json.loads(result.stdout)
    assert rows[1]["a"] == "27/8"
    assert (tmp_path / "coefficients_eps+.csv").exists()


def test_coefficients_rejects_bad_input(runner, tmp_path):
    assert runner.invoke(app, ["coefficients", "--n-max", "1", "-o", str(tmp_path)]).exit_code == 2
    assert runner.invoke(app, ["coefficients", "--epsilon", "0", "-o", str(tmp_path)]).exit_code == 2


def test_lambda_from_shipped_csv(runner, tmp_path):
    result = runner.invoke(app, ["lambda", str(SCENARIOS / "neutrino_masses.csv"), "-o", str(tmp_path), "--json"])
    assert result.exit_code == 0, result.stderr
    results = json.loads(result.stdout)
    assert len(results) == 2
    assert results[1]["lambda_dm"] == pytest.approx(19 / 8)


def test_lambda_reports_the_block_route_deviation(runner, tmp_path):
    csv = str(SCENARIOS / "neutrino_masses.csv")
    table = runner.invoke(app, ["lambda", csv, "-o", str(tmp_path)])
    assert table.exit_code == 0, table.stderr
    assert "known deviation" in table.stdout
    assert "block route exceeds" in table.stdout
    as_json = runner.invoke(app, ["lambda", csv, "-o", str(tmp_path), "--json"])
    assert "known deviation" in as_json.stderr
    results = json.loads(as_json.stdout)
    assert all("2a tr({m_D, m_M}^2)" in r["known_deviation"] for r in results)


def test_lambda_rejects_odd_dimension(runner, tmp_path):
    result = runner.invoke(app, ["lambda", str(SCENARIOS / "neutrino_masses.csv"), "--n", "3", "-o", str(tmp_path)])
    assert result.exit_code == 2


def test_lambda_missing_file(runner, tmp_path):
    result = runner.invoke(app, ["lambda", str(tmp_path / "none.csv"), "-o", str(tmp_path)])
    assert result.exit_code == 2
    assert "File not found" in result.stderr
