"""Command implementations; each takes a resolved ``RunConfig`` and returns an exit code.

Scenario errors propagate as ``SagnacError`` and are turned into records by
the entry point.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Callable, Iterable, Mapping, Sequence
from typing import Any

from sagnac.cli.config import CommandLiteral, OutputFormat, RunConfig
from sagnac.cli.exceptions import EXIT_CHECKS_FAILED, EXIT_OK
from sagnac.cli.validation import run_validation
from sagnac.core.generators import ConditionPreset
from sagnac.core.scenarios import ScenarioSpec, fig2_grid, fig3_curves, run_scenario
from sagnac.json.csv_writer import RNG_NAME, dataclass_rows, write_csv
from sagnac.json.serializer import SagnacJsonSerializer, summarize_result

logger = logging.getLogger(__name__)

FIG2_COLUMNS = ("omega0", "kappa", "log10_ratio", "valid_flag")
FIG3_COLUMNS = ("sweep_value", "x1", "ratio_omega", "ratio_Omega")
CHECK_COLUMNS = ("name", "passed", "observed", "tolerance", "detail")


def _emit_json(config: RunConfig, payload: object) -> None:
    text = SagnacJsonSerializer.to_json_str(payload, pretty=True) + "\n"
    if config.out is None:
        sys.stdout.write(text)
        return
    config.out.write_text(text, encoding="utf-8")
    logger.info("wrote %s", config.out)


def _emit_csv(
    config: RunConfig,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    *,
    seed: int | None = None,
) -> None:
    target = config.out if config.out is not None else sys.stdout
    count = write_csv(
        target, columns, rows, config=config.resolved(), seed=seed, rng_name=RNG_NAME
    )
    logger.info("wrote %d rows", count)


def scenario_spec(config: RunConfig) -> ScenarioSpec:
    """Scenario request described by the configuration.

    Raises:
        ValueError: If the preset or scenario fields are inconsistent.
    """
    assert config.Omega0 is not None and config.kappa is not None
    preset = ConditionPreset(
        config.family.condition, config.kappa, config.omega0, config.Omega0, config.mu
    )
    return ScenarioSpec(
        family=config.family,
        preset=preset,
        n_particles=config.n_particles,
        budget=config.budget,
        n1=config.n1,
        n2=config.n2,
        r1=config.r1,
        x1=config.x1,
        y1=config.y1,
        relax=config.relax,
    )


def cmd_bounds(config: RunConfig) -> int:
    """Bounds, saturability, scaling tags and prefactors of one scenario."""
    result = run_scenario(scenario_spec(config))
    logger.info(
        "%s: var_omega_rel=%.6g var_Omega_rel=%.6g",
        result.family,
        result.bounds.var_omega_rel,
        result.bounds.var_Omega_rel,
    )
    if config.format is OutputFormat.CSV:
        summary = summarize_result(result)
        _emit_csv(config, tuple(summary), [summary])
    else:
        _emit_json(config, result)
    return EXIT_OK


def cmd_fig2(config: RunConfig) -> int:
    """Coherent-versus-Fock grid over (omega0, kappa) at a fixed rotation rate."""
    assert config.Omega0 is not None
    cells = fig2_grid(
        config.Omega0,
        config.omega0_values,
        config.kappa_values,
        budget=config.budget if config.budget is not None else 100.0,
        mu=config.mu,
        fock_gap_mode=config.fock_gap_mode,
        workers=config.workers,
    )
    if config.format is OutputFormat.JSON:
        _emit_json(config, cells)
        return EXIT_OK
    rows = [
        {
            "omega0": cell.omega0,
            "kappa": cell.kappa,
            "log10_ratio": cell.log10_ratio,
            "valid_flag": cell.valid,
        }
        for cell in cells
    ]
    _emit_csv(config, FIG2_COLUMNS, rows)
    return EXIT_OK


def cmd_fig3(config: RunConfig) -> int:
    """Condition II over Condition I ratio curves, one per x1."""
    assert config.kappa is not None and config.y1 is not None
    points = fig3_curves(
        config.sweep,
        config.sweep_values,
        config.x1_values,
        fixed=config.fixed,
        y1=config.y1,
        kappa=config.kappa,
        mu=config.mu,
        workers=config.workers,
    )
    if config.format is OutputFormat.JSON:
        _emit_json(config, points)
    else:
        _emit_csv(config, FIG3_COLUMNS, dataclass_rows(points))
    return EXIT_OK


def cmd_validate(config: RunConfig) -> int:
    """Oracle and identity checks; exit code 1 when any check fails."""
    checks = run_validation(config)
    if config.format is OutputFormat.CSV:
        _emit_csv(config, CHECK_COLUMNS, dataclass_rows(checks), seed=config.seed)
    else:
        _emit_json(config, {"seed": config.seed, "rng": RNG_NAME, "checks": checks})
    failed = [check.name for check in checks if not check.passed]
    if failed:
        logger.warning("%d checks failed: %s", len(failed), ", ".join(failed))
        return EXIT_CHECKS_FAILED
    return EXIT_OK


COMMAND_HANDLERS: dict[CommandLiteral, Callable[[RunConfig], int]] = {
    "bounds": cmd_bounds,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "validate": cmd_validate,
}
