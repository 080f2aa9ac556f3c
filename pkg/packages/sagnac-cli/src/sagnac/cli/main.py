"""Entry point of the ``sagnac`` command."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn, cast

from sagnac.cli.commands import COMMAND_HANDLERS
from sagnac.cli.config import CommandLiteral, OutputFormat, load_config
from sagnac.cli.exceptions import EXIT_SCENARIO_ERROR, CliError, ConfigError
from sagnac.core.exceptions import SagnacError
from sagnac.core.scenarios import ScenarioFamily
from sagnac.json.serializer import SagnacJsonSerializer

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors become ``ConfigError`` so they share the configuration exit code."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(message)


def _common_options() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    group = common.add_argument_group("parameters (frequencies in mu^-2)")
    group.add_argument("--mu", type=float, help="composite mass-radius scale (default 1)")
    group.add_argument("--omega0", type=float, help="true trap frequency (default 1)")
    group.add_argument("--Omega0", type=float, help="true rotation rate")
    group.add_argument("--kappa", type=int, help="preset period index")
    group.add_argument("--N", dest="n_particles", type=int, help="particle number (default 1)")
    group.add_argument("--budget", type=float, help="energy budget per anti-spin pair")

    run = common.add_argument_group("run control")
    run.add_argument("--config", type=Path, help="key = value file with [common] and per-command sections")
    run.add_argument("--out", type=Path, help="output file (default stdout)")
    run.add_argument("--format", choices=[str(f) for f in OutputFormat])
    run.add_argument("--seed", type=int, help="seed of the PCG64 generator (default 0)")
    run.add_argument("--workers", type=int, help="process-pool size for grids (default 1)")
    run.add_argument("--log-level", dest="log_level", help="logging level on stderr (default WARNING)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="sagnac",
        description="Precision limits for joint trap-frequency and rotation-rate estimation.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common_options()

    bounds = commands.add_parser("bounds", parents=[common], help="bounds of one scenario")
    bounds.add_argument("--family", choices=[str(f) for f in ScenarioFamily])
    bounds.add_argument("--n1", type=int, help="Fock level of the spin-up particles")
    bounds.add_argument("--n2", type=int, help="Fock level of the spin-down particles")
    bounds.add_argument("--r1", type=float, help="signed spin-up coherent amplitude")
    bounds.add_argument("--x1", type=float, help="real part of alpha1 (cond2-bzero)")
    bounds.add_argument("--y1", type=float, help="imaginary part of alpha1 (cond2-bzero)")
    bounds.add_argument(
        "--relax", action="store_true", default=None, help="round a non-integer Fock gap"
    )

    fig2 = commands.add_parser("fig2", parents=[common], help="coherent versus Fock grid")
    fig2.add_argument("--omega0-values", dest="omega0_values", type=float, nargs="+")
    fig2.add_argument("--kappa-values", dest="kappa_values", type=int, nargs="+")
    fig2.add_argument("--fock-gap", dest="fock_gap_mode", choices=["strict", "continuous"])

    fig3 = commands.add_parser("fig3", parents=[common], help="Condition II over Condition I ratios")
    fig3.add_argument("--sweep", choices=["Omega0", "omega0"])
    fig3.add_argument("--sweep-values", dest="sweep_values", type=float, nargs="+")
    fig3.add_argument("--x1-values", dest="x1_values", type=float, nargs="+")
    fig3.add_argument("--y1", type=float, help="imaginary part of alpha1 (default 10)")
    fig3.add_argument("--fixed", type=float, help="value of the parameter not swept")

    validate = commands.add_parser("validate", parents=[common], help="oracle and identity checks")
    validate.add_argument("--cutoff", type=int, help="Fock levels of the oracle basis (>= 8)")
    validate.add_argument("--steps", type=int, help="starting integrator steps")
    validate.add_argument("--single-scenarios", dest="single_scenarios", type=int)
    validate.add_argument("--pair-scenarios", dest="pair_scenarios", type=int)
    validate.add_argument("--identity-scenarios", dest="identity_scenarios", type=int)
    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, resolve the configuration and dispatch; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        flags: dict[str, Any] = vars(args)
        command = cast(CommandLiteral, flags.pop("command"))
        config_path = flags.pop("config")
        config = load_config(command, flags, config_path)
    except CliError as exc:
        sys.stderr.write(f"sagnac: {exc.message}\n")
        return exc.exit_code

    _configure_logging(config.log_level)
    logger.debug("resolved configuration: %s", config.resolved())
    try:
        return COMMAND_HANDLERS[command](config)
    except SagnacError as exc:
        logger.error("%s: %s", exc.code, exc.message)
        sys.stdout.write(SagnacJsonSerializer.to_json_str(exc) + "\n")
        return EXIT_SCENARIO_ERROR
    except ValueError as exc:
        error = ConfigError(str(exc))
        sys.stderr.write(f"sagnac: {error.message}\n")
        return error.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
