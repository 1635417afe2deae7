"""Deterministic report emission.

JSON reports are dumped with sorted keys and a fixed float repr so the
same run always produces the same bytes; CSV output follows RFC 4180
(CRLF records, minimal quoting) with 17-significant-digit floats, which
round-trips doubles exactly.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
from pathlib import Path

import numpy as np

__all__ = ["jsonify", "dump_json", "write_csv", "config_sha256"]


def jsonify(obj):
    """Recursively reduce report objects to JSON-safe python values.

    numpy scalars and arrays become python floats and lists;
    dataclasses and named tuples become dicts; non-finite floats map to
    None (nan) or the strings "inf"/"-inf", since strict JSON has no
    spelling for them.
    """
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, str) or obj is None:
        return obj
    if isinstance(obj, np.ndarray):
        return [jsonify(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonify(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if hasattr(obj, "_asdict"):    # named tuples
        return {k: jsonify(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(obj, path) -> None:
    text = json.dumps(jsonify(obj), indent=2, sort_keys=True,
                      allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _format_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def config_sha256(config: dict) -> str:
    """Hash of the resolved config in canonical JSON form."""
    blob = json.dumps(jsonify(config), sort_keys=True,
                      separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
