"""JSON reports: schema-versioned, with complex numbers as [re, im] pairs."""

from __future__ import annotations

import dataclasses
import json

import numpy as np

SCHEMA_VERSION = "1.0"


def jsonable(obj):
    """Recursively convert report payloads to plain JSON types.

    Complex numbers become [re, im]; dataclasses become dicts; numpy scalars
    and arrays collapse to Python numbers and lists.
    """
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple, set)):
        return [jsonable(v) for v in obj]
    if callable(obj):
        return None  # closures (germ evaluators) carry no serializable state
    return str(obj)


def build_report(kind: str, payload, config) -> dict:
    from . import __version__

    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "kind": kind,
        "config_hash": config.digest(),
        "config": config.to_dict(),
        "result": jsonable(payload),
    }


def write_report(path: str, report: dict) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
