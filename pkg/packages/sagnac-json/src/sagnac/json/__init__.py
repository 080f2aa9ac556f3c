"""
Sagnac JSON Module.

Deterministic output for the Sagnac estimation toolkit: orjson reports of
scenario results, grid cells and validation checks, and long-format CSV
files with a provenance header.
"""

# JSON
from sagnac.json.serializer import (
    ReportValue,
    SagnacJsonSerializer,
    default_encoder,
    summarize_result,
)

# CSV
from sagnac.json.csv_writer import RNG_NAME, dataclass_rows, format_value, header_lines, write_csv

__all__ = [
    # JSON
    "SagnacJsonSerializer",
    "ReportValue",
    "default_encoder",
    "summarize_result",
    # CSV
    "RNG_NAME",
    "write_csv",
    "header_lines",
    "format_value",
    "dataclass_rows",
]
