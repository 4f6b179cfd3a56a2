"""Versioned text format for trained models.

The file is JSON with every real number written at 17 significant digits,
which round-trips IEEE doubles exactly. A model bundles the network shape,
the four parameter blocks in gene order, the fitted normalization bounds,
and the indicator schema the normalization was fitted against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import NormStats
from .errors import DataFormatError
from .network import NetworkParams, NetworkShape
from .schema import Indicator, IndicatorSchema

FORMAT_NAME = "minewarn-model"
FORMAT_VERSION = 1


def _render(value, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ",\n".join(f"{pad}  {_render(v, indent + 1)}" for v in value)
        return f"[\n{inner}\n{pad}]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(k)}: {_render(v, indent + 1)}"
            for k, v in value.items()
        )
        return f"{{\n{inner}\n{pad}}}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _matrix(array: np.ndarray) -> list:
    return [[float(v) for v in row] for row in array]


def _vector(array: np.ndarray) -> list:
    return [float(v) for v in array]


@dataclass
class LoadedModel:
    params: NetworkParams
    shape: NetworkShape
    stats: NormStats
    schema: IndicatorSchema


def model_to_text(params: NetworkParams, stats: NormStats,
                  schema: IndicatorSchema, tool_version: str) -> str:
    shape = params.shape
    if len(stats) != shape.n_inputs or len(schema) != shape.n_inputs:
        raise ValueError(
            f"network expects {shape.n_inputs} inputs but normalization covers "
            f"{len(stats)} columns and the schema lists {len(schema)}"
        )
    document = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "tool_version": tool_version,
        "shape": {
            "n_inputs": shape.n_inputs,
            "n_hidden": shape.n_hidden,
            "n_outputs": shape.n_outputs,
        },
        "parameters": {
            "input_weights": _matrix(params.input_weights),
            "hidden_bias": _vector(params.hidden_bias),
            "output_weights": _matrix(params.output_weights),
            "output_bias": _vector(params.output_bias),
        },
        "normalization": {
            "x_min": _vector(stats.x_min),
            "x_max": _vector(stats.x_max),
        },
        "schema": [
            {"code": ind.code, "name": ind.name, "group": ind.group,
             "orientation": ind.orientation}
            for ind in schema.indicators
        ],
    }
    return _render(document, 0) + "\n"


def save_model(path: str | Path, params: NetworkParams, stats: NormStats,
               schema: IndicatorSchema, tool_version: str) -> None:
    Path(path).write_text(model_to_text(params, stats, schema, tool_version),
                          encoding="utf-8")


def load_model(path: str | Path) -> LoadedModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataFormatError(f"model file not found: {path}") from None
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"model file {path} is not valid JSON: {exc}") from None

    if document.get("format") != FORMAT_NAME:
        raise DataFormatError(
            f"model file {path} has format {document.get('format')!r}, "
            f"expected {FORMAT_NAME!r}"
        )
    if document.get("version") != FORMAT_VERSION:
        raise DataFormatError(
            f"model file {path} has version {document.get('version')!r}, "
            f"this build reads version {FORMAT_VERSION}"
        )
    try:
        shape_doc = document["shape"]
        shape = NetworkShape(shape_doc["n_inputs"], shape_doc["n_hidden"],
                             shape_doc["n_outputs"])
        blocks = document["parameters"]
        params = NetworkParams(
            np.array(blocks["input_weights"], dtype=np.float64),
            np.array(blocks["hidden_bias"], dtype=np.float64),
            np.array(blocks["output_weights"], dtype=np.float64),
            np.array(blocks["output_bias"], dtype=np.float64),
        )
        norm = document["normalization"]
        indicators = tuple(
            Indicator(entry["code"], entry["name"], entry["group"],
                      entry["orientation"])
            for entry in document["schema"]
        )
        schema = IndicatorSchema(indicators)
        stats = NormStats(np.array(norm["x_min"], dtype=np.float64),
                          np.array(norm["x_max"], dtype=np.float64),
                          schema.orientations)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"model file {path} is malformed: {exc}") from None
    if params.shape != shape:
        raise DataFormatError(
            f"model file {path}: parameter blocks do not match the declared shape"
        )
    return LoadedModel(params, shape, stats, schema)
