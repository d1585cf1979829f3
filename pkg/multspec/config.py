import os
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical and service settings loaded from environment variables."""

    rel_tol: float = Field(default=1e-9, gt=0, alias="MULTSPEC_REL_TOL")
    boundary_refine_depth: int = Field(
        default=14, gt=0, alias="MULTSPEC_BOUNDARY_REFINE_DEPTH"
    )
    slope_fit_tol: float = Field(default=0.05, gt=0, alias="MULTSPEC_SLOPE_FIT_TOL")
    truncation_degree: int = Field(
        default=256, ge=0, alias="MULTSPEC_TRUNCATION_DEGREE"
    )
    max_degree: int = Field(default=65536, gt=0, alias="MULTSPEC_MAX_DEGREE")
    angular_samples: int = Field(default=512, ge=8, alias="MULTSPEC_ANGULAR_SAMPLES")
    radial_substeps: int = Field(default=8, ge=1, alias="MULTSPEC_RADIAL_SUBSTEPS")
    curve_samples: int = Field(default=4096, ge=64, alias="MULTSPEC_CURVE_SAMPLES")
    ball_samples_log2: int = Field(
        default=16, ge=8, le=22, alias="MULTSPEC_BALL_SAMPLES_LOG2"
    )
    occupancy_cells: int = Field(default=128, ge=8, alias="MULTSPEC_OCCUPANCY_CELLS")
    seed: int = Field(default=20240611, alias="MULTSPEC_SEED")
    threads: int = Field(default=4, ge=1, alias="MULTSPEC_THREADS")
    log_level: str = Field(default="WARNING", alias="MULTSPEC_LOG_LEVEL")

    # HTTP surface
    api_key: Optional[str] = Field(default=None, alias="MULTSPEC_API_KEY")
    rate_limit_per_minute: int = Field(
        default=60, alias="MULTSPEC_RATE_LIMIT_PER_MINUTE"
    )
    max_parallel_requests: int = Field(
        default=2, alias="MULTSPEC_MAX_PARALLEL_REQUESTS"
    )

    model_config = SettingsConfigDict(case_sensitive=False, env_file=".env")


class ToleranceConfig(BaseModel):
    """The tolerance triple shared by every numerical decision."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rel_tol: float = Field(default=1e-9, gt=0)
    boundary_refine_depth: int = Field(default=14, gt=0)
    slope_fit_tol: float = Field(default=0.05, gt=0)


# MULTSPEC_ENV_FILE must come from the process environment, since it
# decides which .env file is read.
_ENV_FILE = os.getenv("MULTSPEC_ENV_FILE") or ".env"

settings = Settings(_env_file=_ENV_FILE)


def current_tolerances() -> ToleranceConfig:
    return ToleranceConfig(
        rel_tol=settings.rel_tol,
        boundary_refine_depth=settings.boundary_refine_depth,
        slope_fit_tol=settings.slope_fit_tol,
    )


def apply_tolerances(tolerances: ToleranceConfig) -> None:
    settings.rel_tol = tolerances.rel_tol
    settings.boundary_refine_depth = tolerances.boundary_refine_depth
    settings.slope_fit_tol = tolerances.slope_fit_tol
