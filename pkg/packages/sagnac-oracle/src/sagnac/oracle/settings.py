"""Oracle defaults, loaded from ``SAGNAC_ORACLE_*`` environment variables."""

from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class OracleSettings(BaseSettings):
    """Cutoffs, integrator steps and finite-difference controls for the oracle."""

    model_config = SettingsConfigDict(
        env_prefix="SAGNAC_ORACLE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Truncation
    coherent_cutoff: int = Field(default=48, ge=8, description="Fock levels for coherent inputs")
    fock_cutoff: int = Field(default=24, ge=8, description="Fock levels for Fock inputs")
    leakage_tol: float = Field(default=1e-8, gt=0)

    # Time stepping
    steps: int = Field(default=4096, ge=1, description="Starting midpoint steps")
    max_steps: int = Field(default=65536, ge=1)
    step_tol: float = Field(default=1e-8, gt=0, description="Max change of U on step halving")
    chunk: int = Field(default=256, ge=1, description="Step exponentials built per batch")

    # Finite differences
    fd_rel_step: float = Field(default=1e-4, gt=0)
    richardson_tol: float = Field(default=1e-4, gt=0)
    max_halvings: int = Field(default=6, ge=1)


# Global settings instance
oracle_settings = OracleSettings()
