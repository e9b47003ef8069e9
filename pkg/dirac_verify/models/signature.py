"""
Metric signature model
"""
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
import numpy as np


class Signature(BaseModel):
    """
    Signature (p, q, epsilon) of the flat metric diag(+1 x p, -1 x q).

    epsilon fixes the sign of the Clifford relation
    gamma(a) gamma(b) + gamma(b) gamma(a) = 2 epsilon g(a, b).
    """

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=0, description="Number of +1 metric directions")
    q: int = Field(..., ge=0, description="Number of -1 metric directions")
    epsilon: int = Field(default=1, description="Clifford relation sign (+1 or -1)")

    @field_validator("epsilon")
    @classmethod
    def _epsilon_is_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {value}")
        return value

    @model_validator(mode="after")
    def _dimension_is_even(self) -> "Signature":
        n = self.p + self.q
        if n < 2 or n % 2:
            raise ValueError(f"dimension n = p + q must be even and >= 2, got {n}")
        return self

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def eta(self) -> np.ndarray:
        """Diagonal metric entries in the fixed orthonormal basis"""
        return np.array([1.0] * self.p + [-1.0] * self.q)

    @property
    def chirality_exponent(self) -> int:
        """m = n(n-1)/2 + q; the chirality prefactor is sqrt((-1)^m)"""
        return self.n * (self.n - 1) // 2 + self.q

    @property
    def admits_majorana(self) -> bool:
        """Whether a real structure anticommuting with the chirality exists on the Grassmann fiber"""
        return self.chirality_exponent % 2 == 1

    def on_shell_directions(self) -> list[int]:
        """Directions j with epsilon * eta_j = +1 (real plane-wave modes exist along them)"""
        return [j for j in range(self.n) if self.epsilon * self.eta[j] > 0]

    @property
    def label(self) -> str:
        sign = "+" if self.epsilon > 0 else "-"
        return f"({self.p},{self.q},{sign})"
