"""Versioned JSON / CSV output helpers."""

from __future__ import annotations

import csv
import io
import json
import math
import numbers

SCHEMA = "phason/1"


def _clean(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return _clean(obj.item())
    return obj


def dumps(payload: dict) -> str:
    """JSON text with the schema tag, sorted keys, and no NaN/inf literals."""
    data = {"schema": SCHEMA, **_clean(payload)}
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def fmt(x) -> str:
    """17 significant digits, scientific notation; integers pass through."""
    if isinstance(x, numbers.Integral) and not isinstance(x, bool):
        return str(x)
    return f"{float(x):.16e}"


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA}\r\n")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()
