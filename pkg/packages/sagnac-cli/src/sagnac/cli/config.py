"""Run configuration for the ``sagnac`` command line.

Values are resolved with the precedence flags > config file > environment
(``SAGNAC_*``) > defaults. A few defaults depend on the command, e.g. the
rotation rate is 0.5 for ``bounds`` and 10 for ``fig2``; those fields default
to None here and are filled by :meth:`RunConfig.for_command`.
"""

from __future__ import annotations

import configparser
import logging
import math
import re
from enum import Enum
from pathlib import Path
from typing import Any, Literal, TypeAlias

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from sagnac.cli.exceptions import ConfigError
from sagnac.core.scenarios import ScenarioFamily

logger = logging.getLogger(__name__)

CommandLiteral: TypeAlias = Literal["bounds", "fig2", "fig3", "validate"]

COMMANDS: tuple[CommandLiteral, ...] = ("bounds", "fig2", "fig3", "validate")
SECTIONS = ("common", *COMMANDS)

LIST_FIELDS = frozenset({"omega0_values", "kappa_values", "sweep_values", "x1_values"})

COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "bounds": {"Omega0": 0.5, "kappa": 1, "format": "json"},
    "fig2": {"Omega0": 10.0, "format": "csv"},
    "fig3": {"kappa": 10, "y1": 10.0, "format": "csv"},
    "validate": {"Omega0": 0.5, "kappa": 1, "format": "json"},
}


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"

    def __str__(self) -> str:
        return self.value


class RunConfig(BaseSettings):
    """Every command-line flag as a validated field.

    The environment is read case-sensitively: ``SAGNAC_omega0`` and
    ``SAGNAC_Omega0`` are different parameters.
    """

    model_config = SettingsConfigDict(
        env_prefix="SAGNAC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Physical parameters (frequencies in mu^-2)
    mu: float = Field(default=1.0, gt=0, description="Composite mass-radius scale")
    omega0: float = Field(default=1.0, gt=0, description="True trap frequency")
    Omega0: float | None = Field(default=None, description="True rotation rate")
    kappa: int | None = Field(default=None, ge=0, description="Preset period index")
    n_particles: int = Field(default=1, ge=1, description="Particle number N")
    budget: float | None = Field(default=None, gt=0, description="Energy budget per pair")

    # Scenario selection (bounds)
    family: ScenarioFamily = Field(default=ScenarioFamily.COND1_FOCK)
    n1: int | None = Field(default=None, ge=0)
    n2: int | None = Field(default=None, ge=0)
    r1: float | None = None
    x1: float | None = None
    y1: float | None = None
    relax: bool = False

    # fig2 grid
    omega0_values: list[float] = Field(default_factory=lambda: [0.5, 1.0, 30.0, 50.0, 150.0, 300.0])
    kappa_values: list[int] = Field(default_factory=lambda: [1, 2, 4, 5, 10])
    fock_gap_mode: Literal["strict", "continuous"] = "strict"

    # fig3 curves
    sweep: Literal["Omega0", "omega0"] = "Omega0"
    sweep_values: list[float] = Field(default_factory=lambda: [0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0])
    x1_values: list[float] = Field(default_factory=lambda: [-1.0, -3.0, -5.0])
    fixed: float | None = Field(default=None, gt=0, description="The non-swept true value")

    # validate
    cutoff: int | None = Field(default=None, ge=8, description="Fock levels of the oracle basis")
    steps: int = Field(default=4096, ge=1, description="Starting integrator steps")
    single_scenarios: int = Field(default=20, ge=1)
    pair_scenarios: int = Field(default=5, ge=0)
    identity_scenarios: int = Field(default=100, ge=1)

    # Run control and output
    workers: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    out: Path | None = None
    format: OutputFormat | None = None
    log_level: str = "WARNING"

    @field_validator("Omega0", "r1", "x1", "y1")
    @classmethod
    def _finite(cls, value: float | None) -> float | None:
        if value is not None and not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @field_validator("kappa_values")
    @classmethod
    def _positive_kappas(cls, value: list[int]) -> list[int]:
        if not value or min(value) < 1:
            raise ValueError("kappa values must be >= 1")
        return value

    @field_validator("omega0_values", "sweep_values")
    @classmethod
    def _positive_values(cls, value: list[float]) -> list[float]:
        if not value or not all(math.isfinite(v) and v > 0 for v in value):
            raise ValueError("values must be positive and finite")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return level

    def for_command(self, command: CommandLiteral) -> RunConfig:
        """Copy with the command-dependent defaults filled in where still unset."""
        update = {
            name: value
            for name, value in COMMAND_DEFAULTS[command].items()
            if getattr(self, name) is None
        }
        if "format" in update:
            update["format"] = OutputFormat(update["format"])
        return self.model_copy(update=update)

    def resolved(self) -> dict[str, Any]:
        """JSON-ready mapping of every field, recorded in output headers."""
        return self.model_dump(mode="json")


def _split_list(raw: str) -> list[str]:
    return [item for item in re.split(r"[,\s]+", raw.strip()) if item]


def read_config_file(path: Path, command: CommandLiteral) -> dict[str, Any]:
    """Values of the ``[common]`` section overlaid with the command's own section.

    Raises:
        ConfigError: If the file cannot be read or names an unknown section or key.
    """
    parser = configparser.ConfigParser(interpolation=None)
    # keep omega0 and Omega0 apart
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        with path.open(encoding="utf-8") as stream:
            parser.read_file(stream)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc

    unknown_sections = [name for name in parser.sections() if name not in SECTIONS]
    if unknown_sections:
        raise ConfigError(f"unknown section(s) in {path}: {', '.join(unknown_sections)}")

    values: dict[str, Any] = {}
    for section in ("common", command):
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            if key not in RunConfig.model_fields:
                raise ConfigError(f"unknown key {key!r} in section [{section}] of {path}")
            values[key] = _split_list(raw) if key in LIST_FIELDS else raw
    logger.debug("read %d values from %s", len(values), path)
    return values


def load_config(
    command: CommandLiteral,
    flags: dict[str, Any] | None = None,
    config_path: Path | None = None,
) -> RunConfig:
    """Merge file and flag values over the environment and validate them.

    Raises:
        ConfigError: If any value is invalid.
    """
    merged: dict[str, Any] = {}
    if config_path is not None:
        merged.update(read_config_file(config_path, command))
    if flags:
        merged.update({key: value for key, value in flags.items() if value is not None})
    try:
        config = RunConfig(**merged)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}"
            for error in exc.errors()
        )
        raise ConfigError(f"invalid configuration: {problems}") from exc
    return config.for_command(command)
