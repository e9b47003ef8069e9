"""
Data models for Dirac Verify
"""
from .signature import Signature
from .scenario import ScenarioConfig, TwistDims, MassInputs, Hermiticity, RealBranch
from .report import CheckStatus, CheckResult, RunReport, LagrangianReport, CosmologicalConstant

__all__ = [
    "Signature",
    "ScenarioConfig",
    "TwistDims",
    "MassInputs",
    "Hermiticity",
    "RealBranch",
    "CheckStatus",
    "CheckResult",
    "RunReport",
    "LagrangianReport",
    "CosmologicalConstant",
]
