"""
Report models for check runs and Lagrangian identities
"""
from pydantic import BaseModel, Field
from typing import Optional, List, Dict, Any
from datetime import datetime
from enum import Enum


class CheckStatus(str, Enum):
    """Outcome of a single check"""
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"
    SKIPPED = "skipped"


class CheckResult(BaseModel):
    """Result of one check inside a run"""
    check_id: str
    status: CheckStatus
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    wall_time: float = 0.0
    message: str = ""
    details: Dict[str, Any] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (CheckStatus.PASSED, CheckStatus.SKIPPED)


class RunReport(BaseModel):
    """Aggregate report of a scenario run"""
    scenario: str
    signature: str
    seed: int
    precision: str = "complex128"
    threads: int = 1
    created_at: datetime = Field(default_factory=datetime.now)
    results: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.ok for result in self.results)

    def counts(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in CheckStatus}
        for result in self.results:
            counts[result.status.value] += 1
        return counts


class LagrangianReport(BaseModel):
    """
    Trace-identity report: integrated terms, exact coefficients and residuals.

    Coefficients are exact rationals rendered as strings (e.g. "27/8").
    """
    n: int
    epsilon: int
    terms: Dict[str, float] = Field(default_factory=dict)
    coefficients: Dict[str, str] = Field(default_factory=dict)
    residuals: Dict[str, float] = Field(default_factory=dict)
    flags: Dict[str, str] = Field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


class CosmologicalConstant(BaseModel):
    """Neutrino-sector cosmological constant with its cross-term decomposition"""
    n: int
    a: str
    lambda_dm: float
    lambda_block: float
    block_gap: float
    predicted_gap: float
    route_residual: float
    known_deviation: str = ""
    terms: Dict[str, float] = Field(default_factory=dict)
    m_dirac: List[List[float]]
    m_majorana: List[List[float]]
