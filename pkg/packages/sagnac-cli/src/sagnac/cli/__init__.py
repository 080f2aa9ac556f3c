"""
Sagnac CLI Module.

The ``sagnac`` command: scenario bounds, figure-data sweeps written as
long-format CSV, and the oracle validation suite.
"""

# Configuration and errors
from sagnac.cli.config import OutputFormat, RunConfig, load_config, read_config_file
from sagnac.cli.exceptions import (
    EXIT_CHECKS_FAILED,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_SCENARIO_ERROR,
    CliError,
    ConfigError,
)

# Commands
from sagnac.cli.commands import cmd_bounds, cmd_fig2, cmd_fig3, cmd_validate, scenario_spec
from sagnac.cli.main import build_parser, main, run
from sagnac.cli.validation import CheckResult, run_validation

__all__ = [
    # Configuration and errors
    "RunConfig",
    "OutputFormat",
    "load_config",
    "read_config_file",
    "CliError",
    "ConfigError",
    "EXIT_OK",
    "EXIT_CHECKS_FAILED",
    "EXIT_SCENARIO_ERROR",
    "EXIT_CONFIG_ERROR",
    # Commands
    "scenario_spec",
    "cmd_bounds",
    "cmd_fig2",
    "cmd_fig3",
    "cmd_validate",
    "build_parser",
    "run",
    "main",
    "CheckResult",
    "run_validation",
]
