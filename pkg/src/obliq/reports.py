"""CSV / Markdown / JSON-lines writers for fit, simulation and table reports.

CSV and JSON-lines carry full precision (``%.17g``, so every float
round-trips); Markdown is rounded for reading.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

FORMATS = {"csv": ".csv", "md": ".md", "jsonl": ".jsonl"}


def _exact(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return "" if value is None else str(value)


def _display(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "NA"
        if math.isinf(value):
            return "∞" if value > 0 else "-∞"
        return f"{value:.4f}"
    return "" if value is None else str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return _exact(value)
    return value


def render(rows: Iterable[dict], columns: Sequence[str], fmt: str = "csv",
           title: str | None = None) -> str:
    rows = list(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_exact(row.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "md":
        lines = [f"## {title}", ""] if title else []
        lines.append("| " + " | ".join(columns) + " |")
        lines.append("|" + "|".join("---" for _ in columns) + "|")
        for row in rows:
            lines.append("| " + " | ".join(_display(row.get(c)) for c in columns) + " |")
        return "\n".join(lines) + "\n"
    if fmt == "jsonl":
        return "".join(
            json.dumps({c: _json_value(row.get(c)) for c in columns}) + "\n"
            for row in rows
        )
    raise ValueError(f"unknown format {fmt!r}")


def write(path: Path, rows: Iterable[dict], columns: Sequence[str],
          fmt: str = "csv", title: str | None = None) -> Path:
    path = Path(path).with_suffix(FORMATS[fmt])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(rows, columns, fmt, title), encoding="utf-8")
    return path


def read_csv(path: Path) -> list[dict]:
    """Read a report written by :func:`write`, converting numeric cells."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for key, cell in row.items():
                try:
                    parsed[key] = float(cell)
                except ValueError:
                    parsed[key] = cell
            out.append(parsed)
    return out
