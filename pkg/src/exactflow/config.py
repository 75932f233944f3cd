"""Run configuration: one JSON document, validated before any computation.

Every tolerance used to decide pass or fail lives in ``tolerances``. The
defaults are:

=====================  =======  ===============================================
key                    default  meaning
=====================  =======  ===============================================
``residual``           1e-10    max scaled residual norm for ``residual-scan``
``continuity``         1e-12    float-mode coefficient threshold for ``reduce``
``order_min``          0.7      lowest accepted observed L1 order (``converge``)
``order_max``          1.3      highest accepted observed L1 order
``exponent``           0.1      allowed deviation of a growth exponent
=====================  =======  ===============================================
"""

from __future__ import annotations

import copy
import json
from pathlib import Path

import jsonschema

from .errors import ConfigError

COMMANDS = ("eval", "residual-scan", "verify-symbolic", "reduce", "converge", "blowup",
            "diagnostics")
FORMATS = ("json", "csv")

DEFAULT_TOLERANCES = {
    "residual": 1e-10,
    "continuity": 1e-12,
    "order_min": 0.7,
    "order_max": 1.3,
    "exponent": 0.1,
}

_rational = {"oneOf": [{"type": "number"},
                       {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}
_interval = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_family = {"type": "object", "required": ["tag"], "properties": {"tag": {"type": "string"}}}
_timefunc = {"type": "object", "required": ["kind"], "properties": {"kind": {"type": "string"}}}


def _section(properties, required=()):
    return {"type": "object", "additionalProperties": False, "properties": properties,
            "required": list(required)}


SCHEMA = _section({
    "command": {"enum": list(COMMANDS)},
    "families": {"type": "array", "items": _family, "minItems": 1},
    "seed": {"type": "integer", "minimum": 0},
    "threads": {"type": "integer", "minimum": 1},
    "out": {"type": "string"},
    "format": {"enum": list(FORMATS)},
    "tolerances": _section({k: {"type": "number", "exclusiveMinimum": 0} if k != "order_min"
                            else {"type": "number"} for k in DEFAULT_TOLERANCES}),
    "eval": _section({
        "points": {"type": "array", "minItems": 1,
                   "items": {"type": "array", "items": {"type": "number"},
                             "minItems": 4, "maxItems": 4}},
        "jet": {"type": "boolean"},
    }),
    "sampling": _section({
        "samples": {"type": "integer", "minimum": 0},
        "t": _interval,
        "x": {"type": "array", "items": _interval, "minItems": 3, "maxItems": 3},
        "viscosity": {"type": ["number", "null"], "exclusiveMinimum": 0},
    }),
    "reduce": _section({
        "times": {"type": "array", "items": _rational, "minItems": 1},
        "ansatz": _section({
            "a": {"type": "array", "items": _timefunc, "minItems": 3, "maxItems": 3},
            "B": {"type": "array", "minItems": 3, "maxItems": 3,
                  "items": {"type": "array", "items": _timefunc, "minItems": 3, "maxItems": 3}},
            "b": _timefunc,
            "gamma": {"oneOf": [_rational, {"type": "null"}]},
        }, required=("a", "B")),
    }),
    "converge": _section({
        "grids": {"type": "array", "items": {"type": "integer", "minimum": 4}, "minItems": 1},
        "lo": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "hi": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "t0": {"type": "number"},
        "t_final": {"type": "number"},
        "cfl": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "rho_floor": {"type": "number", "exclusiveMinimum": 0},
        "vtk": {"type": "boolean"},
        "include_timing": {"type": "boolean"},
    }),
    "diagnostics": _section({
        "t": {"type": "number"},
        "radii": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                  "minItems": 2},
        "shells": {"type": "integer", "minimum": 1},
        "polar": {"type": "integer", "minimum": 1},
        "azimuthal": {"type": "integer", "minimum": 1},
        "expected_mass_exponent": {"type": "number"},
        "expected_energy_exponent": {"type": "number"},
    }),
})

DEFAULTS = {
    "seed": 0,
    "threads": 1,
    "out": "exactflow-out",
    "format": "json",
    "tolerances": DEFAULT_TOLERANCES,
    "eval": {"points": [[0.0, 0.0, 0.0, 0.0]], "jet": False},
    "sampling": {"samples": 10000, "t": [0.0, 2.0], "x": [[-5.0, 5.0]] * 3, "viscosity": None},
    "reduce": {"times": [0]},
    "converge": {"grids": [16, 32, 64], "lo": [-1.0] * 3, "hi": [1.0] * 3, "t0": 0.0,
                 "t_final": 0.25, "cfl": 0.45, "rho_floor": 1e-6, "vtk": False,
                 "include_timing": False},
    "diagnostics": {"t": 0.0, "radii": [4.0, 8.0, 16.0], "shells": 64, "polar": 32,
                    "azimuthal": 64},
}


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None


def load(path) -> dict:
    """Parse a config file. ``OSError`` propagates; bad JSON raises :class:`ConfigError`."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None


def resolve(doc: dict, overrides: dict | None = None) -> dict:
    """Validate ``doc``, apply flag overrides, then fill defaults one section deep."""
    doc = copy.deepcopy(doc)
    for key, value in (overrides or {}).items():
        if value is not None:
            doc[key] = value
    validate(doc)
    out = copy.deepcopy(DEFAULTS)
    for key, value in doc.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = {**out[key], **value}
        else:
            out[key] = value
    return out
