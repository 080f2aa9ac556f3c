"""CLI exceptions and process exit codes."""

from __future__ import annotations

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_SCENARIO_ERROR = 2
EXIT_CONFIG_ERROR = 64


class CliError(Exception):
    """Base exception for failures of the command-line layer itself."""

    def __init__(self, message: str, exit_code: int = EXIT_CONFIG_ERROR) -> None:
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)

    def to_record(self) -> dict[str, str]:
        return {"error": self.__class__.__name__, "message": self.message}


class ConfigError(CliError):
    """Flags, config file or environment do not form a valid run configuration."""

    def __init__(self, message: str) -> None:
        super().__init__(message, exit_code=EXIT_CONFIG_ERROR)
