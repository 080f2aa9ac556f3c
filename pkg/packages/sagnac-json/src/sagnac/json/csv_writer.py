"""Long-format CSV with a provenance header.

Layout::

    # config={"budget":100.0,...}
    # units=frequencies in mu^-2
    # rng=PCG64 seed=7
    omega0,kappa,log10_ratio,valid
    0.5,1,0.30102999566398120,true

Floats carry 17 significant digits so every value round-trips exactly.
Non-finite floats are written as ``nan``, ``inf`` and ``-inf``.
"""

from __future__ import annotations

import csv
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import orjson

from sagnac.json.serializer import ReportValue, default_encoder

logger = logging.getLogger(__name__)

RNG_NAME = "PCG64"
UNITS = "frequencies in mu^-2"


def format_value(value: ReportValue | np.generic) -> str:
    """Text form of one cell."""
    if isinstance(value, np.generic):
        value = value.item()
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def header_lines(
    config: Mapping[str, Any] | None = None,
    *,
    seed: int | None = None,
    rng_name: str = RNG_NAME,
) -> list[str]:
    """``# key=value`` comment lines describing how the file was produced."""
    lines = []
    if config is not None:
        dumped = orjson.dumps(dict(config), default=default_encoder, option=orjson.OPT_SORT_KEYS)
        lines.append(f"# config={dumped.decode('utf-8')}")
    lines.append(f"# units={UNITS}")
    if seed is not None:
        lines.append(f"# rng={rng_name} seed={seed}")
    return lines


def dataclass_rows(items: Iterable[object]) -> list[dict[str, Any]]:
    """Field mappings of result dataclasses, ready for ``write_csv``."""
    rows = []
    for item in items:
        if not is_dataclass(item) or isinstance(item, type):
            raise TypeError(f"expected a dataclass instance, got {type(item)}")
        rows.append(asdict(item))
    return rows


def _write(
    stream: TextIO,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    header: list[str],
) -> int:
    for line in header:
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    count = 0
    for row in rows:
        writer.writerow([format_value(row[name]) for name in columns])
        count += 1
    return count


def write_csv(
    target: Path | str | TextIO,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    *,
    config: Mapping[str, Any] | None = None,
    seed: int | None = None,
    rng_name: str = RNG_NAME,
) -> int:
    """Write rows in column order under the provenance header.

    Args:
        target: File path, or an open text stream (e.g. ``sys.stdout``).
        columns: Column names; every row must provide each of them.
        rows: One mapping per observation.
        config: Resolved run configuration, recorded as sorted JSON.
        seed: Seed of the random generator, if the run drew random numbers.
        rng_name: Name of the generator behind ``seed``.

    Returns:
        Number of data rows written.

    Raises:
        KeyError: If a row lacks one of the columns.
    """
    header = header_lines(config, seed=seed, rng_name=rng_name)
    if isinstance(target, (str, Path)):
        path = Path(target)
        with path.open("w", newline="", encoding="utf-8") as stream:
            count = _write(stream, columns, rows, header)
        logger.debug("wrote %d rows to %s", count, path)
        return count
    return _write(target, columns, rows, header)
