"""CSV/JSON emission with locale-independent, fixed-precision floats."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from typing import Any, Iterable, Sequence


def fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, int)) and not isinstance(value, bool):
        if isinstance(value, int):
            return str(value)
        if math.isnan(value):
            return "nan"
        return format(value, ".15g")
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_text(path: str | os.PathLike, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    write_text(path, csv_text(header, rows))


def _round_floats(obj):
    if isinstance(obj, float):
        return float(format(obj, ".15g")) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def json_text(obj: Any) -> str:
    return json.dumps(_round_floats(obj), indent=2, sort_keys=False) + "\n"
