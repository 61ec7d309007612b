"""
Configuration management for the minimax toolkit.
"""
from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # Application
    APP_NAME: str = "Minimax Kit"
    ENVIRONMENT: str = "development"
    LOG_LEVEL: str = "warning"

    # Numerical tolerances
    ROW_SUM_TOLERANCE: float = 1e-12
    LP_FEASIBILITY_TOLERANCE: float = 1e-9
    LP_MAX_PIVOTS: int = 200_000
    CERTIFICATE_TOLERANCE: float = 1e-8
    SUPPORT_TOLERANCE: float = 1e-10
    PRIOR_ATTAINMENT_TOLERANCE: float = 1e-12

    # Reports
    SIGNIFICANT_DIGITS: int = 12

    # Solvers
    DEFAULT_FP_ITERATIONS: int = 10_000
    PRIOR_SELECTION: str = "central"  # "central" or "dual"
    SCHEDULE_WORKERS: int = 1
    LIPSCHITZ_SPOT_SAMPLES: int = 512

    # Verification suite
    VERIFY_SEED: int = 20231019

    class Config:
        env_file = ".env"
        case_sensitive = True


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
