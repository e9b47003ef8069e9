"""
Tests for report writers
"""
import json
from datetime import datetime

import pandas as pd

from dirac_verify.core.lagrangians import coefficient_rows, lambda_dm
from dirac_verify.generators.report_generator import RESULT_COLUMNS, ReportGenerator
from dirac_verify.models import CheckResult, CheckStatus, RunReport


def _report():
    return RunReport(
        scenario="unit test",
        signature="(2,0,+)",
        seed=7,
        created_at=datetime(2024, 1, 2, 3, 4, 5),
        results=[
            CheckResult(check_id="clifford.chirality", status=CheckStatus.PASSED, residual=1e-15, tolerance=1e-12),
            CheckResult(
                check_id="lagrangians.pi_identity",
                status=CheckStatus.FAILED,
                residual=0.25,
                tolerance=1e-8,
                details={"fitted": {"yang_mills": -1.0, "quartic": 1.2}, "expected": {"yang_mills": "-1", "quartic": "9/8"}},
            ),
        ],
    )


def test_write_run_report(tmp_path):
    paths = ReportGenerator().write_run_report(_report(), str(tmp_path))
    assert paths["json"].endswith("unit_test_20240102_030405.json")
    data = json.loads((tmp_path / "unit_test_20240102_030405.json").read_text(encoding="utf-8"))
    assert data["scenario"] == "unit test"
    assert data["results"][1]["status"] == "failed"
    frame = pd.read_csv(paths["csv"])
    assert list(frame.columns) == RESULT_COLUMNS
    assert list(frame["check_id"]) == ["clifford.chirality", "lagrangians.pi_identity"]
    assert "coefficients" in paths


def test_fit_frame_errors():
    frame = ReportGenerator().fit_frame(_report())
    errors = dict(zip(frame["term"], frame["error"]))
    assert errors["yang_mills"] == 0.0
    assert abs(errors["quartic"] - 0.075) < 1e-12


def test_report_without_fits_has_no_coefficient_file(tmp_path):
    report = _report()
    report.results = report.results[:1]
    paths = ReportGenerator().write_run_report(report, str(tmp_path), stem="plain")
    assert set(paths) == {"json", "csv"}


def test_coefficient_table(tmp_path):
    path = ReportGenerator().write_coefficient_table(coefficient_rows(4), str(tmp_path / "out"), "c.csv")
    frame = pd.read_csv(path, dtype=str)
    assert list(frame["n"]) == ["2", "4"]
    assert frame.loc[1, "a"] == "27/8"


def test_write_lambda(tmp_path):
    results = [lambda_dm([[1.0]], [[0.0]])]
    path = ReportGenerator().write_lambda(results, str(tmp_path), "lambda.json")
    data = json.loads(open(path, encoding="utf-8").read())
    assert data[0]["a"] == "27/8"
    assert abs(data[0]["lambda_dm"] - 19 / 8) < 1e-12
