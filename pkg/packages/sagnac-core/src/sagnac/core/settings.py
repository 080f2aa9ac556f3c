"""Numerical defaults for the Sagnac core, loaded from the environment."""

from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from sagnac.core.quadrature import QuadratureScheme


class NumericsSettings(BaseSettings):
    """Tolerances and quadrature defaults, overridable via ``SAGNAC_*`` variables."""

    model_config = SettingsConfigDict(
        env_prefix="SAGNAC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Quadrature for tabulated sweep profiles
    quadrature_scheme: QuadratureScheme = Field(default=QuadratureScheme.GAUSS_LEGENDRE)
    quadrature_panels: int = Field(default=16, ge=8, description="Starting panels per knot interval")
    quadrature_order: int = Field(default=8, ge=2, description="Gauss-Legendre order per panel")
    quadrature_abs_tol: float = Field(default=1e-12, gt=0)
    quadrature_max_panels: int = Field(default=4096, ge=8)

    # Zero tests
    closure_tol: float = Field(default=1e-9, gt=0, description="Tolerance on the integral of omega_p")
    saturability_tol: float = Field(default=1e-9, gt=0)
    scaling_zero_tol: float = Field(default=1e-9, gt=0)
    singular_tol: float = Field(default=1e-12, gt=0)

    # Truncated state vectors
    vector_cutoff: int = Field(default=64, ge=8)
    leakage_tol: float = Field(default=1e-8, gt=0)


# Global settings instance
numerics = NumericsSettings()
