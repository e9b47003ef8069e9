"""
Configuration management for the Dirac operator verification suite
"""
from pydantic_settings import BaseSettings
from pydantic import Field
from typing import Optional
from pathlib import Path

# Project root directory (parent of dirac_verify/)
PROJECT_ROOT = Path(__file__).parent.parent


class Settings(BaseSettings):
    """Suite settings loaded from environment variables"""

    # Application
    app_name: str = Field(default="Dirac Verify", validation_alias="APP_NAME")
    log_level: str = Field(default="INFO", validation_alias="DIRAC_LOG_LEVEL")

    # Reproducibility
    default_seed: int = Field(default=20240601, validation_alias="DIRAC_SEED")
    threads: int = Field(default=1, validation_alias="DIRAC_THREADS")

    # Field budgets
    default_band: int = Field(default=1, validation_alias="DIRAC_BAND_K")
    default_capacity: Optional[int] = Field(default=None, validation_alias="DIRAC_CAPACITY")

    # Tolerances
    algebra_tolerance: float = Field(default=1e-12, validation_alias="DIRAC_ALGEBRA_TOL")
    pointwise_tolerance: float = Field(default=1e-10, validation_alias="DIRAC_POINTWISE_TOL")
    composed_tolerance: float = Field(default=1e-9, validation_alias="DIRAC_COMPOSED_TOL")
    integral_tolerance: float = Field(default=1e-8, validation_alias="DIRAC_INTEGRAL_TOL")

    # Directories
    output_dir: str = Field(default="./output", validation_alias="DIRAC_OUTPUT_DIR")

    class Config:
        env_file = str(PROJECT_ROOT / ".env")
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"
        populate_by_name = True

    def capacity_for(self, band: int) -> int:
        """Capacity used for a band budget K (4K+2 unless overridden)"""
        if self.default_capacity is not None:
            return max(self.default_capacity, 4 * band + 2)
        return 4 * band + 2


# Global settings instance
settings = Settings()
