"""Tabular input: strict CSV parsing, the table value type, and shape detection.

A table is one label column (x) plus one or more numeric measure columns (y).
Parsing is strict on purpose: insights quote numbers back to the analyst, so a
cell that does not survive bit-exact float parsing is an error, not a guess.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from datetime import date
from enum import Enum

from .errors import (
    DuplicateColumnName,
    MissingYColumns,
    NonNumericCell,
    RaggedRows,
    TooFewRows,
    ValidationError,
)

# "." is the only decimal mark; no grouping separators, no NaN/inf words.
_STRICT_FLOAT_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")
_YEAR_RE = re.compile(r"^\d{4}$")

DEFAULT_SUBJECTS: tuple[str, ...] = (
    "agriculture", "construction", "culture", "demographics", "ecommerce",
    "economy", "education", "energy", "environment", "finance", "food",
    "health", "manufacturing", "marketing", "media", "politics", "real estate",
    "retail", "society", "sports", "technology", "telecommunications",
    "tourism", "transportation", "other",
)


class ChartKind(str, Enum):
    LINE = "line"
    COLUMN = "column"
    BAR = "bar"
    PIE = "pie"
    NONE = "none"


@dataclass(frozen=True)
class YColumn:
    name: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class DataTable:
    """Validated table: parallel x labels and numeric y columns."""

    x_name: str
    x_values: tuple[str, ...]
    y_columns: tuple[YColumn, ...]

    def __post_init__(self):
        if len(self.x_values) < 2:
            raise TooFewRows(f"need >= 2 rows, got {len(self.x_values)}")
        if not self.y_columns:
            raise MissingYColumns("table has no measure columns")
        names = [self.x_name] + [c.name for c in self.y_columns]
        if any(not n for n in names):
            raise ValidationError("column names must be non-empty")
        if len(set(names)) != len(names):
            raise DuplicateColumnName(f"duplicate column name in {names}")
        for col in self.y_columns:
            if len(col.values) != len(self.x_values):
                raise RaggedRows(0, len(self.x_values), len(col.values))
            for i, v in enumerate(col.values):
                if not math.isfinite(v):
                    raise NonNumericCell(col.name, i + 1, repr(v))

    @property
    def n_rows(self) -> int:
        return len(self.x_values)

    def column(self, name: str) -> YColumn:
        for col in self.y_columns:
            if col.name == name:
                return col
        raise KeyError(name)

    def to_json(self) -> str:
        payload = {
            "x_name": self.x_name,
            "x_values": list(self.x_values),
            "y_columns": [{"name": c.name, "values": list(c.values)} for c in self.y_columns],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "DataTable":
        payload = json.loads(text)
        return cls(
            x_name=payload["x_name"],
            x_values=tuple(payload["x_values"]),
            y_columns=tuple(
                YColumn(name=c["name"], values=tuple(float(v) for v in c["values"]))
                for c in payload["y_columns"]
            ),
        )


@dataclass(frozen=True)
class TableContext:
    """Chart-page context shown next to the table."""

    title: str
    subject: str = "other"
    chart_kind: ChartKind = ChartKind.NONE

    def __post_init__(self):
        if not self.title.strip():
            raise ValidationError("title must be non-empty")


@dataclass(frozen=True)
class TableShape:
    is_time_series: bool
    is_multi_column: bool
    n_rows: int


def normalize_subject(subject: str, subjects: tuple[str, ...] = DEFAULT_SUBJECTS) -> str:
    cleaned = subject.strip().lower()
    return cleaned if cleaned in subjects else "other"


def _parse_cell(cell: str, column: str, row: int) -> float:
    text = cell.strip()
    if not _STRICT_FLOAT_RE.match(text):
        raise NonNumericCell(column, row, cell)
    return float(text)


def parse_csv(data: bytes | str, header: bool = True) -> DataTable:
    """Decode an RFC-4180 CSV into a DataTable.

    The first column is the x column, the rest are numeric measures. With
    header=False, names are synthesized as X, Y1, Y2, ...
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise TooFewRows("empty input")

    if header:
        names = [c.strip() for c in rows[0]]
        body = rows[1:]
    else:
        width = len(rows[0])
        names = ["X"] + [f"Y{i}" for i in range(1, width)]
        body = rows

    if len(names) < 2:
        raise MissingYColumns("need an x column and at least one y column")
    if len(set(names)) != len(names):
        raise DuplicateColumnName(f"duplicate column name in {names}")
    if len(body) < 2:
        raise TooFewRows(f"need >= 2 data rows, got {len(body)}")

    x_values: list[str] = []
    y_values: list[list[float]] = [[] for _ in names[1:]]
    for i, row in enumerate(body, start=1):
        if len(row) != len(names):
            raise RaggedRows(i, len(names), len(row))
        x_values.append(row[0].strip())
        for j, cell in enumerate(row[1:]):
            y_values[j].append(_parse_cell(cell, names[j + 1], i))

    return DataTable(
        x_name=names[0],
        x_values=tuple(x_values),
        y_columns=tuple(
            YColumn(name=n, values=tuple(vals)) for n, vals in zip(names[1:], y_values)
        ),
    )


def serialize_csv(table: DataTable) -> str:
    """Canonical CSV form; floats use repr so parsing is bit-exact."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([table.x_name] + [c.name for c in table.y_columns])
    for i, x in enumerate(table.x_values):
        writer.writerow([x] + [repr(c.values[i]) for c in table.y_columns])
    return buf.getvalue()


def _time_key(value: str) -> tuple[int, int, int] | None:
    if _YEAR_RE.match(value):
        return (int(value), 1, 1)
    try:
        d = date.fromisoformat(value)
    except ValueError:
        return None
    return (d.year, d.month, d.day)


def detect_shape(table: DataTable) -> TableShape:
    """Time series iff every x is a 4-digit year or ISO date, strictly monotonic."""
    keys = [_time_key(x) for x in table.x_values]
    is_ts = False
    if all(k is not None for k in keys):
        increasing = all(a < b for a, b in zip(keys, keys[1:]))
        decreasing = all(a > b for a, b in zip(keys, keys[1:]))
        is_ts = increasing or decreasing
    return TableShape(
        is_time_series=is_ts,
        is_multi_column=len(table.y_columns) >= 2,
        n_rows=table.n_rows,
    )


def most_recent_index(table: DataTable) -> int | None:
    """Row index of the newest time label, or None when not a time series."""
    if not detect_shape(table).is_time_series:
        return None
    keys = [_time_key(x) for x in table.x_values]
    return max(range(len(keys)), key=lambda i: keys[i])


def x_range_label(table: DataTable, shape: TableShape | None = None) -> str:
    """"<first>-<last>" for time series, otherwise "ALL <x_name>"."""
    if shape is None:
        shape = detect_shape(table)
    if shape.is_time_series:
        return f"{table.x_values[0]}-{table.x_values[-1]}"
    return f"ALL {table.x_name}"
