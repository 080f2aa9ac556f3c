"""JSON reports for Sagnac results using orjson."""

from __future__ import annotations

import os
from collections.abc import Mapping
from typing import Any, TypeAlias

import numpy as np
import orjson

from sagnac.core.exceptions import SagnacError
from sagnac.core.scenarios import ScenarioResult

ReportValue: TypeAlias = float | int | str | bool | None

PREFACTOR_NAMES = ("A", "B", "C", "D", "E", "F")


def default_encoder(obj: Any) -> Any:
    """
    Encoder for types orjson does not handle itself.

    orjson already serializes dataclasses, enums and real numpy arrays;
    complex values and error objects need a JSON shape chosen here.

    Raises:
        TypeError: If the object type cannot be serialized.
    """
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, SagnacError):
        return obj.to_record()
    if isinstance(obj, os.PathLike):
        return os.fspath(obj)
    raise TypeError(f"Object of type {type(obj)} is not JSON serializable")


def json_options(*, pretty: bool = False, sort_keys: bool = True) -> int:
    options = orjson.OPT_SERIALIZE_NUMPY
    if sort_keys:
        options |= orjson.OPT_SORT_KEYS
    if pretty:
        options |= orjson.OPT_INDENT_2
    return options


class SagnacJsonSerializer:
    """
    Serialize scenario results, coefficient sets, grid cells, validation
    checks and error records to JSON.

    Output is deterministic: keys are sorted and floats use orjson's
    shortest round-tripping representation.
    """

    @staticmethod
    def to_json(obj: object, *, pretty: bool = False) -> bytes:
        """
        Serialize a result object to JSON bytes.

        Args:
            obj: A dataclass from ``sagnac.core``, a ``SagnacError``, or a list
                or mapping of those.
            pretty: If True, indent with two spaces.

        Raises:
            TypeError: If some value has no JSON form.
        """
        data = _serialize_object(obj)
        return orjson.dumps(data, default=default_encoder, option=json_options(pretty=pretty))

    @staticmethod
    def to_json_str(obj: object, *, pretty: bool = False) -> str:
        return SagnacJsonSerializer.to_json(obj, pretty=pretty).decode("utf-8")


def summarize_result(result: ScenarioResult) -> dict[str, ReportValue]:
    """Flat report of one scenario: bounds, tags, prefactors A-F and the closed forms.

    The same mapping feeds the JSON ``summary`` block and the CSV row, so both
    formats carry identical numbers.
    """
    preset = result.preset
    bounds = result.bounds
    summary: dict[str, ReportValue] = {
        "family": str(result.family),
        "condition": str(preset.kind),
        "kappa": preset.kappa,
        "omega0": preset.omega0,
        "Omega0": preset.Omega0,
        "mu": preset.mu,
        "n_particles": result.ensemble.n_particles,
        "var_omega_rel": bounds.var_omega_rel,
        "var_Omega_rel": bounds.var_Omega_rel,
        "saturable": bounds.saturable,
        "scaling_omega": str(bounds.scaling_omega),
        "scaling_Omega": str(bounds.scaling_Omega),
        "repetitions": bounds.repetitions,
    }
    for name in PREFACTOR_NAMES:
        summary[name] = getattr(result.prefactors, name)
    closed = result.closed_form
    summary["closed_var_omega_rel"] = None if closed is None else closed.var_omega_rel
    summary["closed_var_Omega_rel"] = None if closed is None else closed.var_Omega_rel
    summary["pipeline_deviation"] = result.pipeline_deviation
    return summary


def _serialize_result(result: ScenarioResult) -> dict[str, Any]:
    return {
        "summary": summarize_result(result),
        "preset": result.preset,
        "ensemble": result.ensemble,
        "coeffs": result.coeffs,
        "prefactors": result.prefactors,
        "bounds": result.bounds,
        "closed_form": result.closed_form,
        "metadata": result.metadata,
    }


def _serialize_object(obj: object) -> Any:
    """Replace the objects that need a custom layout; orjson handles the rest."""
    if isinstance(obj, ScenarioResult):
        return _serialize_result(obj)
    if isinstance(obj, SagnacError):
        return obj.to_record()
    if isinstance(obj, (list, tuple)):
        return [_serialize_object(item) for item in obj]
    if isinstance(obj, Mapping):
        return {str(key): _serialize_object(value) for key, value in obj.items()}
    return obj
