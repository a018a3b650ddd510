"""Machine-readable run reports (JSON, schema version "1") and CSV tables."""
from __future__ import annotations

import csv
import io
import json
import math
import sys

import numpy as np

SCHEMA_VERSION = "1"
REPORT_FIELDS = ("schema_version", "subcommand", "config", "results", "witnesses", "pass")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        # JSON has no inf/nan; encode them as strings.
        return v if math.isfinite(v) else repr(v)
    return obj


def build_report(subcommand: str, config: dict, results, witnesses, passed: bool) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "config": _plain(config),
        "results": _plain(results),
        "witnesses": _plain(witnesses),
        "pass": bool(passed),
    }


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(_plain(v), sort_keys=True)
    return str(v)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    header = list(rows[0])
    for row in rows[1:]:
        header += [k for k in row if k not in header]
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in header})
    return buf.getvalue()


def emit_report(report: dict, fmt: str = "json", path: str | None = None, rows: list[dict] | None = None):
    """Write ``report`` as JSON, or ``rows`` (default: the results) as CSV.

    Floats in JSON use Python's shortest round-trip representation; CSV cells
    carry 17 significant digits. ``path`` of ``None`` or ``"-"`` means stdout.
    """
    if fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif fmt == "csv":
        if rows is None:
            res = report["results"]
            rows = res if isinstance(res, list) else [res]
        text = to_csv([_flatten(r) for r in rows])
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and v and all(not isinstance(x, (dict, list)) for x in v.values()):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out
