"""
Scenario configuration models
"""
from pydantic import BaseModel, Field, model_validator
from typing import Optional, List, Dict
from enum import Enum

from dirac_verify.config import settings

from .signature import Signature


class Hermiticity(str, Enum):
    """Hermiticity branch for generated mass data"""
    ANTI_HERMITIAN = "anti_hermitian"
    HERMITIAN = "hermitian"


class RealBranch(str, Enum):
    """Real-structure branch on the Grassmann fiber: gamma^cc = +gamma or -gamma"""
    PLUS = "plus"
    MINUS = "minus"


class TwistDims(BaseModel):
    """Dimensions of the twist blocks V_R, V_L, E_R, E_L"""
    v_r: int = Field(default=1, ge=0)
    v_l: int = Field(default=0, ge=0)
    e_r: int = Field(default=1, ge=0)
    e_l: int = Field(default=1, ge=0)

    @property
    def v(self) -> int:
        return self.v_r + self.v_l

    @property
    def e(self) -> int:
        return self.e_r + self.e_l

    @property
    def total(self) -> int:
        return self.v + self.e

    @model_validator(mode="after")
    def _not_empty(self) -> "TwistDims":
        if self.total == 0:
            raise ValueError("twist dimensions must not all be zero")
        return self


class MassInputs(BaseModel):
    """Constant real neutrino mass matrices, inline or by file reference"""
    m_dirac: Optional[List[List[float]]] = None
    m_majorana: Optional[List[List[float]]] = None
    file: Optional[str] = None


class ScenarioConfig(BaseModel):
    """
    One verification scenario: signature, twist, band budget, seed and checks
    """
    name: str = Field(default="scenario")
    p: int = Field(..., ge=0)
    q: int = Field(..., ge=0)
    epsilon: int = Field(default=1)
    twist: TwistDims = Field(default_factory=TwistDims)
    band: int = Field(default_factory=lambda: settings.default_band, ge=0, description="Input band budget K")
    capacity: Optional[int] = Field(default=None, description="Band limit, at least 4K+2")
    seed: int = Field(default_factory=lambda: settings.default_seed)
    samples: Optional[int] = Field(default=None, ge=1, description="Override for random cases per sampled check")
    checks: List[str] = Field(default_factory=list)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    masses: MassInputs = Field(default_factory=MassInputs)
    hermiticity: Hermiticity = Hermiticity.ANTI_HERMITIAN
    branch: RealBranch = RealBranch.MINUS

    @model_validator(mode="after")
    def _consistent(self) -> "ScenarioConfig":
        # Raises on odd n / bad epsilon
        Signature(p=self.p, q=self.q, epsilon=self.epsilon)
        if self.capacity is not None and self.capacity < 4 * self.band + 2:
            raise ValueError(
                f"capacity {self.capacity} is below 4K+2 = {4 * self.band + 2}"
            )
        return self

    @property
    def signature(self) -> Signature:
        return Signature(p=self.p, q=self.q, epsilon=self.epsilon)

    @property
    def effective_capacity(self) -> int:
        if self.capacity is not None:
            return self.capacity
        return settings.capacity_for(self.band)
