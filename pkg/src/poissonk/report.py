"""Rows, fixed-precision number formatting and CSV / JSON-lines I/O."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import mpmath

__all__ = ["Num", "ReportRow", "fmt_lambda", "fmt_value", "fmt_scaled", "write_rows", "read_rows"]


class Num(str):
    """A numeric cell already rounded to its declared precision."""


def fmt_lambda(x: float) -> Num:
    return Num(f"{x:.12f}")


def fmt_value(x: float) -> Num:
    if not math.isfinite(x):
        return Num("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))
    return Num(f"{x:.15g}")


def fmt_scaled(value: float, log_scale: float) -> Num:
    """Format value * exp(log_scale) even when it leaves the float range."""
    if value == 0.0:
        return Num("0")
    if abs(log_scale) < 600.0:
        true = value * math.exp(log_scale)
        if true != 0.0 and math.isfinite(true) and 1e-300 < abs(true) < 1e300:
            return fmt_value(true)
    with mpmath.workdps(25):
        x = mpmath.mpf(value) * mpmath.exp(mpmath.mpf(log_scale))
        e = int(mpmath.floor(mpmath.log10(abs(x))))
        mant = x / mpmath.mpf(10) ** e
        if abs(mant) >= 10:
            mant, e = mant / 10, e + 1
    return Num(f"{float(mant):.15g}e{e:+03d}")


@dataclass(frozen=True)
class ReportRow:
    """One output row; ``columns`` is an ordered tuple of (name, value)."""

    kind: str
    columns: tuple

    @property
    def names(self):
        return tuple(name for name, _ in self.columns)

    def as_dict(self):
        return dict(self.columns)


def _csv_cell(v):
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _json_value(v):
    if isinstance(v, Num):
        return "null" if v in ("nan", "inf", "-inf") else str(v)
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_json_value(x) for x in v) + "]"
    return json.dumps(v)


def write_rows(rows, stream, fmt: str = "csv"):
    rows = list(rows)
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        if rows:
            writer.writerow(rows[0].names)
        for r in rows:
            writer.writerow([_csv_cell(v) for _, v in r.columns])
    elif fmt == "json":
        for r in rows:
            body = ",".join(f"{json.dumps(name)}:{_json_value(v)}" for name, v in r.columns)
            stream.write("{" + body + "}\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_rows(text: str):
    """Parse CSV (with header) or JSON lines back into a list of dicts.

    CSV cells stay strings; JSON values come back typed.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return [json.loads(line) for line in text.splitlines() if line.strip()]
    return list(csv.DictReader(io.StringIO(text)))
