"""Experiment records: JSONL persistence and CSV export.

One JSON line per result is the canonical format; CSV is a lossy view.
Rationals serialize as "num/den" strings and get a companion float column
on export.
"""

from __future__ import annotations

import csv
import dataclasses
import datetime
import enum
import io
import json
import re
import subprocess
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .groups import GroupSpec

SCHEMA_VERSION = 1

_RATIONAL_RE = re.compile(r"^-?\d+/\d+$")


def to_jsonable(obj):
    """Recursively convert library values to JSON-safe structures."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, GroupSpec):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(key): to_jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return "unknown"


def experiment_record(command: str, params: dict, result, started_at: str,
                      wall_time: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": to_jsonable(params),
        "result": to_jsonable(result),
        "started_at": started_at,
        "wall_time": wall_time,
        "git_describe": git_describe(),
    }


def now_iso() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def flatten(record: dict, prefix: str = "") -> dict:
    """Flatten nested dicts with dotted keys for CSV export."""
    out = {}
    for key, val in record.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(flatten(val, prefix=f"{name}."))
        else:
            out[name] = val
    return out


def export_csv(records, columns) -> str:
    """Flat CSV of the requested columns, one row per record.

    Rational-valued columns ("num/den" strings) get an extra <col>_float
    column.  A record missing a requested column is an error that names
    the record index.
    """
    flat_rows = [flatten(rec) for rec in records]
    for i, row in enumerate(flat_rows):
        for col in columns:
            if col not in row:
                raise DomainError(f"record {i} is missing column {col!r}")
    header: list[str] = []
    for col in columns:
        header.append(col)
        if any(
            isinstance(row[col], str) and _RATIONAL_RE.match(row[col])
            for row in flat_rows
        ):
            header.append(f"{col}_float")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in flat_rows:
        out_row = []
        for col in header:
            if col.endswith("_float") and col not in row:
                base = row[col[: -len("_float")]]
                out_row.append(float(Fraction(base)) if isinstance(base, str) else base)
            else:
                out_row.append(row[col])
        writer.writerow(out_row)
    return buf.getvalue()
