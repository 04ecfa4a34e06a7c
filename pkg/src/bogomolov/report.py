"""JSON and CSV serialization of experiment results."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction

import numpy as np

from .linalg import Subspace

SCHEMA_KEYS = ("command", "params", "results", "bounds", "seed", "runtime_ms", "version")


def fraction_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def subspace_json(S: Subspace) -> dict:
    if S.field.is_prime:
        rows = [[int(v) for v in row] for row in S.basis]
    else:
        rows = [[f"{Fraction(v).numerator}/{Fraction(v).denominator}" for v in row] for row in S.basis]
    return {"p": S.field.p, "ambient": S.ambient, "dim": S.dim, "rref_rows": rows}


def plain(obj):
    """Recursively convert results to JSON-compatible values.

    Fractions become ``{"num", "den"}``; floats are kept only where the
    caller produced them.
    """
    if isinstance(obj, Fraction):
        return fraction_json(obj)
    if isinstance(obj, Subspace):
        return subspace_json(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def make_report(command, params, results, bounds=None, seed=None, runtime_ms=0.0) -> dict:
    from . import __version__

    return {
        "command": command,
        "params": plain(params),
        "results": plain(results),
        "bounds": plain(bounds or {}),
        "seed": seed,
        "runtime_ms": runtime_ms,
        "version": __version__,
    }


def census_results(rep) -> dict:
    return {
        "total": rep.total,
        "in_image": rep.in_image,
        "fraction": fraction_json(rep.fraction),
        "b0_histogram": {str(k): v for k, v in sorted(rep.b0_histogram.items())},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def to_csv(report: dict) -> str:
    """Flatten ``params`` and ``results`` into one header row and one value row."""
    flat = {"command": report["command"], "seed": report["seed"], "version": report["version"]}

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list):
            flat[prefix] = json.dumps(value)
        else:
            flat[prefix] = value

    walk("params", report["params"])
    walk("results", report["results"])
    walk("bounds", report["bounds"])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
    w.writeheader()
    w.writerow(flat)
    return buf.getvalue()
