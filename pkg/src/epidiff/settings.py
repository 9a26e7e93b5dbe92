from pathlib import Path
from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from epidiff.types import LinearSolverKind, RunMode


class Settings(BaseSettings):
    """Process-level settings for epidiff.

    pydantic_settings automatically scans environmental variables and validates
    the provided values. Model parameters live in the TOML run configuration,
    not here.
    """

    model_config = SettingsConfigDict(env_prefix="EPIDIFF_", frozen=False, validate_assignment=True)

    mode: RunMode = RunMode.SIMULATE
    output_dir: Path = Path("out")
    seed: int = 0
    threads: int = Field(default=1, ge=1)
    cadence: int = Field(default=10, ge=1)
    log_level: str = "INFO"
    linear_solver: LinearSolverKind = LinearSolverKind.AUTO
    max_halvings: int = Field(default=20, ge=0)
    negativity_tol: float = Field(default=1e-12, ge=0)
    nonnegativity_seeds: int = Field(default=20, ge=1)
    nonnegativity_t_end: float = Field(default=10.0, gt=0)
    steady_tol: float = Field(default=1e-10, gt=0)

    def update(self, **kwargs: Any) -> None:
        for k, v in kwargs.items():
            if k in Settings.model_fields and v is not None:
                setattr(self, k, v)


settings = Settings()
