"""Self-describing CSV and JSON outputs.

CSV layout: ``# key: <json>`` metadata lines, one header row, then data rows.
Floats are written with 17 significant digits so that values round-trip
exactly; re-parsing a file and writing it back reproduces it byte for byte.
``SOURCE_DATE_EPOCH`` pins the timestamp for reproducible output.
"""
from __future__ import annotations

from datetime import datetime, timezone
import json
import math
import os
import re

import numpy as np

from . import __version__

TOOL = "plasma_ldp"
_INT_RE = re.compile(r"^[+-]?\d+$")


def timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def _plain(obj):
    """Convert numpy scalars/arrays and non-finite floats to JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def header_meta(command: str, config: dict, errors: dict | None = None) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "timestamp": timestamp(),
        "command": command,
        "config": _plain(config),
        "errors": _plain(errors or {}),
    }


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.16e}"


def parse_value(text: str):
    return int(text) if _INT_RE.match(text) else float(text)


def format_csv(meta: dict, header, rows) -> str:
    lines = [f"# {k}: {json.dumps(_plain(v))}" for k, v in meta.items()]
    lines.append(",".join(header))
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def parse_csv(text: str):
    """Inverse of :func:`format_csv`: returns ``(meta, header, rows)``."""
    meta, header, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = json.loads(value)
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([parse_value(v) for v in line.split(",")])
    return meta, header, rows


def format_json(meta: dict, payload: dict) -> str:
    doc = dict(meta)
    doc["payload"] = _plain(payload)
    return json.dumps(doc, indent=2) + "\n"
