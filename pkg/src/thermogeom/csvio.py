"""Deterministic CSV emission.

Floats are written with 17 significant digits so that every double
round-trips exactly; rows end in ``\\n`` regardless of platform.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence

import numpy as np

__all__ = ["format_value", "csv_text", "write_csv", "read_csv"]


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if x == 0.0:
            return "0"  # drop the sign of negative zero
        return format(x, ".17g")
    return str(x)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write to ``path`` (``"-"`` or ``None`` for no file) and return the text."""
    text = csv_text(header, rows)
    if path not in (None, "-"):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def read_csv(text: str):
    """``(header, rows)`` with every field left as a string."""
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]
