"""
Parsers for scenario configs, neutrino mass files and field literals
Scenario configs are JSON; mass files are JSON or CSV with flexible column names
"""
import json
from fnmatch import fnmatchcase
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from dirac_verify.core.fourier_fields import FourierField
from dirac_verify.models import ScenarioConfig


class ParseResult:
    """Result of parsing operation"""

    def __init__(self, items: List[Any], errors: List[str] = None):
        self.items = items
        self.errors = errors or []
        self.success = len(errors) == 0 if errors else True

    def __len__(self):
        return len(self.items)


MassPair = Tuple[np.ndarray, np.ndarray]


def complex_array(value) -> np.ndarray:
    """Nested [re, im] pairs (or plain reals) to a complex array"""
    array = np.asarray(value, dtype=float)
    if array.ndim >= 1 and array.shape[-1] == 2:
        return array[..., 0] + 1j * array[..., 1]
    return array.astype(complex)


def parse_field_literal(literal: Iterable[Dict[str, Any]], n: int, capacity: int) -> FourierField:
    """
    Build a FourierField from [{"k": [ints], "value": [[re, im], ...]}, ...]

    Raises:
        ValueError: for a mode of the wrong length or missing keys
    """
    modes = {}
    for index, entry in enumerate(literal):
        if "k" not in entry or "value" not in entry:
            raise ValueError(f"mode {index}: expected keys 'k' and 'value'")
        k = tuple(int(x) for x in entry["k"])
        if len(k) != n:
            raise ValueError(f"mode {index}: k={list(k)} does not have {n} components")
        value = complex_array(entry["value"])
        modes[k] = modes[k] + value if k in modes else value
    return FourierField.from_modes(modes, n, capacity)


class MassFileParser:
    """
    Neutrino mass pairs (m_D, m_M) from JSON or CSV.

    JSON: {"m_dirac": [[...]], "m_majorana": [[...]]} or a list of such objects.
    CSV: long format, one matrix entry per row.
    """

    # Column name variations (case-insensitive)
    COLUMN_MAPPINGS = {
        "matrix": ["matrix", "kind", "name", "block", "mass"],
        "row": ["row", "i", "r"],
        "col": ["col", "column", "j", "c"],
        "value": ["value", "entry", "v", "val"],
        "pair": ["pair", "case", "sample", "id"],
    }

    DIRAC_LABELS = {"dirac", "m_dirac", "md", "m_d", "d"}
    MAJORANA_LABELS = {"majorana", "m_majorana", "mm", "m_m", "m"}

    def __init__(self):
        self.detected_columns: Dict[str, str] = {}

    def parse(self, file_path: str) -> ParseResult:
        """
        Parse mass pairs from file (JSON or CSV)

        Returns:
            ParseResult with a list of (m_dirac, m_majorana) float arrays
        """
        try:
            file_path_obj = Path(file_path)
            if not file_path_obj.exists():
                return ParseResult([], [f"File not found: {file_path}"])

            suffix = file_path_obj.suffix.lower()
            if suffix == ".json":
                return self._parse_json(json.loads(file_path_obj.read_text(encoding="utf-8")))
            if suffix == ".csv":
                return self._parse_frame(pd.read_csv(file_path_obj))
            return ParseResult([], [f"Unsupported file format: {file_path_obj.suffix}"])

        except Exception as e:
            return ParseResult([], [f"Failed to parse file: {str(e)}"])

    def _parse_json(self, data) -> ParseResult:
        entries = data if isinstance(data, list) else [data]
        pairs, errors = [], []
        for index, entry in enumerate(entries):
            try:
                pairs.append(self._pair(entry.get("m_dirac"), entry.get("m_majorana")))
            except Exception as e:
                errors.append(f"Entry {index}: {str(e)}")
        return ParseResult(pairs, errors)

    def _detect_columns(self, df: pd.DataFrame):
        """Detect which columns map to matrix/row/col/value/pair"""
        self.detected_columns = {}
        df_columns_lower = {str(col).strip().lower(): col for col in df.columns}
        for field, variations in self.COLUMN_MAPPINGS.items():
            for variation in variations:
                if variation in df_columns_lower:
                    self.detected_columns[field] = df_columns_lower[variation]
                    break

    def _parse_frame(self, df: pd.DataFrame) -> ParseResult:
        self._detect_columns(df)
        missing = [f for f in ("matrix", "row", "col", "value") if f not in self.detected_columns]
        if missing:
            return ParseResult([], [f"Missing columns: {', '.join(missing)} (found {list(df.columns)})"])

        cols = self.detected_columns
        frame = df.rename(columns={v: k for k, v in cols.items()})
        if "pair" not in cols:
            frame["pair"] = 0
        frame["matrix"] = frame["matrix"].astype(str).str.strip().str.lower()

        pairs, errors = [], []
        for pair_id, group in frame.groupby("pair", sort=False):
            try:
                dirac = group[group["matrix"].isin(self.DIRAC_LABELS)]
                majorana = group[group["matrix"].isin(self.MAJORANA_LABELS)]
                unknown = set(group["matrix"]) - self.DIRAC_LABELS - self.MAJORANA_LABELS
                if unknown:
                    raise ValueError(f"unknown matrix labels {sorted(unknown)}")
                pairs.append(self._pair(self._dense(dirac), self._dense(majorana)))
            except Exception as e:
                errors.append(f"Pair {pair_id}: {str(e)}")
        return ParseResult(pairs, errors)

    @staticmethod
    def _dense(entries: pd.DataFrame) -> np.ndarray:
        """Long-format entries to a dense matrix; absent entries are zero"""
        if entries.empty:
            raise ValueError("matrix has no entries")
        size = int(max(entries["row"].max(), entries["col"].max())) + 1
        matrix = np.zeros((size, size))
        for _, row in entries.iterrows():
            matrix[int(row["row"]), int(row["col"])] = float(row["value"])
        return matrix

    @staticmethod
    def _pair(m_dirac, m_majorana) -> MassPair:
        if m_dirac is None or m_majorana is None:
            raise ValueError("both m_dirac and m_majorana are required")
        pair = []
        for name, m in (("m_dirac", m_dirac), ("m_majorana", m_majorana)):
            m = np.asarray(m, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
            pair.append(m)
        if pair[0].shape != pair[1].shape:
            raise ValueError(f"mass matrices have different shapes: {pair[0].shape} vs {pair[1].shape}")
        return pair[0], pair[1]


class ScenarioParser:
    """
    Scenario configs from JSON: a single object, a list, or {"scenarios": [...]}.

    Mass file references are resolved relative to the config file and inlined.
    Check ids are validated against the known checks when given.
    """

    def __init__(self, known_checks: Optional[Iterable[str]] = None, mass_parser: Optional[MassFileParser] = None):
        self.known_checks = None if known_checks is None else list(known_checks)
        self.mass_parser = mass_parser or MassFileParser()

    def parse(self, file_path: str) -> ParseResult:
        """
        Parse scenarios from a JSON file

        Returns:
            ParseResult with ScenarioConfig objects and any schema errors
        """
        try:
            file_path_obj = Path(file_path)
            if not file_path_obj.exists():
                return ParseResult([], [f"File not found: {file_path}"])
            if file_path_obj.suffix.lower() != ".json":
                return ParseResult([], [f"Unsupported file format: {file_path_obj.suffix}"])
            data = json.loads(file_path_obj.read_text(encoding="utf-8"))
            return self.parse_data(data, file_path_obj.parent)

        except json.JSONDecodeError as e:
            return ParseResult([], [f"Invalid JSON: {str(e)}"])
        except Exception as e:
            return ParseResult([], [f"Failed to parse file: {str(e)}"])

    def parse_data(self, data, base_dir: Path = Path(".")) -> ParseResult:
        if isinstance(data, dict) and "scenarios" in data:
            entries = data["scenarios"]
        elif isinstance(data, list):
            entries = data
        else:
            entries = [data]

        scenarios, errors = [], []
        for index, entry in enumerate(entries):
            label = entry.get("name", f"#{index}") if isinstance(entry, dict) else f"#{index}"
            try:
                config = ScenarioConfig.model_validate(entry)
            except ValidationError as e:
                for err in e.errors():
                    location = ".".join(str(part) for part in err["loc"]) or "config"
                    errors.append(f"Scenario {label}: {location}: {err['msg']}")
                continue

            problems = self._validate(config, base_dir)
            if problems:
                errors.extend(f"Scenario {label}: {p}" for p in problems)
                continue
            scenarios.append(config)
        return ParseResult(scenarios, errors)

    def _validate(self, config: ScenarioConfig, base_dir: Path) -> List[str]:
        problems = []
        if self.known_checks is not None:
            for pattern in config.checks:
                if not any(fnmatchcase(c, pattern) for c in self.known_checks):
                    problems.append(f"unknown check '{pattern}'")
        masses = config.masses
        if masses.file:
            result = self.mass_parser.parse(str(base_dir / masses.file))
            if not result.success or not result.items:
                problems.extend(result.errors or [f"mass file {masses.file} holds no mass pair"])
            else:
                m_dirac, m_majorana = result.items[0]
                masses.m_dirac = m_dirac.tolist()
                masses.m_majorana = m_majorana.tolist()
        elif (masses.m_dirac is None) != (masses.m_majorana is None):
            problems.append("masses need both m_dirac and m_majorana")
        return problems
