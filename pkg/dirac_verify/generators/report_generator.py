"""
Report writers: run reports (JSON + CSV), coefficient tables and Lambda results
"""
from datetime import datetime
from fractions import Fraction
import json
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from dirac_verify.models import CosmologicalConstant, RunReport

RESULT_COLUMNS = ["check_id", "status", "residual", "tolerance", "wall_time", "message"]
FIT_COLUMNS = ["check_id", "term", "coefficient", "fitted", "error"]


class ReportGenerator:
    """Generator for machine-readable verification reports"""

    def __init__(self, float_format: str = "%.17g"):
        self.float_format = float_format

    @staticmethod
    def _stem(report: RunReport) -> str:
        safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in report.scenario)
        return f"{safe}_{report.created_at.strftime('%Y%m%d_%H%M%S')}"

    def results_frame(self, report: RunReport) -> pd.DataFrame:
        """One row per check"""
        rows = [
            {
                "check_id": r.check_id,
                "status": r.status.value,
                "residual": r.residual,
                "tolerance": r.tolerance,
                "wall_time": r.wall_time,
                "message": r.message,
            }
            for r in report.results
        ]
        return pd.DataFrame(rows, columns=RESULT_COLUMNS)

    def fit_frame(self, report: RunReport) -> pd.DataFrame:
        """Exact against fitted coefficients for every check that refits a trace identity"""
        rows = []
        for r in report.results:
            fitted = r.details.get("fitted")
            expected = r.details.get("expected")
            if not fitted or not expected:
                continue
            for term, value in fitted.items():
                exact = expected.get(term)
                rows.append({
                    "check_id": r.check_id,
                    "term": term,
                    "coefficient": exact,
                    "fitted": value,
                    "error": None if exact is None else abs(value - float(Fraction(exact))),
                })
        return pd.DataFrame(rows, columns=FIT_COLUMNS)

    def write_run_report(self, report: RunReport, output_dir: str, stem: Optional[str] = None) -> Dict[str, str]:
        """
        Write the full report as JSON and the per-check table as CSV

        Args:
            report: Run report
            output_dir: Output directory
            stem: File name stem (scenario name and timestamp by default)

        Returns:
            Map of artifact kind to path
        """
        output_path = Path(output_dir)
        output_path.mkdir(parents=True, exist_ok=True)
        stem = stem or self._stem(report)

        paths = {}
        json_path = output_path / f"{stem}.json"
        json_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        paths["json"] = str(json_path)

        csv_path = output_path / f"{stem}.csv"
        self.results_frame(report).to_csv(csv_path, index=False, float_format=self.float_format)
        paths["csv"] = str(csv_path)

        fits = self.fit_frame(report)
        if not fits.empty:
            fit_path = output_path / f"{stem}_coefficients.csv"
            fits.to_csv(fit_path, index=False, float_format=self.float_format)
            paths["coefficients"] = str(fit_path)
        return paths

    def write_coefficient_table(self, rows: List[Dict[str, str]], output_dir: str,
                                filename: str = "coefficients.csv") -> str:
        """Exact-rational coefficient rows, one per n"""
        output_path = Path(output_dir)
        output_path.mkdir(parents=True, exist_ok=True)
        path = output_path / filename
        pd.DataFrame(rows).to_csv(path, index=False)
        return str(path)

    def write_lambda(self, results: List[CosmologicalConstant], output_dir: str,
                     filename: Optional[str] = None) -> str:
        output_path = Path(output_dir)
        output_path.mkdir(parents=True, exist_ok=True)
        filename = filename or f"lambda_{datetime.now().strftime('%Y%m%d_%H%M%S')}.json"
        path = output_path / filename
        path.write_text(json.dumps([r.model_dump() for r in results], indent=2), encoding="utf-8")
        return str(path)
