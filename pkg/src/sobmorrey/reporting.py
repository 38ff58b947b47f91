"""Deterministic CSV/JSON emission with atomic writes.

Floats are always printed with 17 significant digits so that identical runs
give identical bytes.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, enum.Enum):
        return str(x.value)
    if isinstance(x, (float, Fraction)):
        return format(float(x), ".17g")
    if hasattr(x, "dtype"):  # numpy scalar
        return fmt(x.item())
    return str(x)


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        if isinstance(row, dict):
            row = [row[c] for c in columns]
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _json_scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, enum.Enum):
        x = x.value
    if hasattr(x, "dtype"):
        x = x.item()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (float, Fraction)):
        x = float(x)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return format(x, ".17g")
    return _json_string(str(x))


def _json_string(s: str) -> str:
    return json.dumps(s)


def json_text(obj, indent: int = 2) -> str:
    """Like json.dumps(indent=2, sort_keys=False) but with fixed float formatting."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{_json_string(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            items = [pad + enc(v, level + 1) for v in o]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        return _json_scalar(o)

    return enc(obj, 0) + "\n"


def atomic_write(path, text: str) -> None:
    """Write to a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix="." + path.name + ".", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
