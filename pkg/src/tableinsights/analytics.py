"""Deterministic per-table analytics.

Each analysis inspects one measure column (or a pair, for correlation) and
produces a typed payload that the RDF codec can cast without re-deriving
anything. Inapplicable analyses are simply absent from run_all's output.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

from .errors import ConstantSeries, LengthMismatch, SeriesTooShort
from .table import DataTable, TableShape, detect_shape, most_recent_index
from .textnum import round_half_even

TREND_THRESHOLD = 0.1
TREND_EPSILON = 1e-9
CORRELATION_THRESHOLD = 0.8
RANK_DEPTH = 3


class AnalysisType(str, Enum):
    MAX = "MAX"
    MIN = "MIN"
    SUM = "SUM"
    AVERAGE = "AVERAGE"
    VALUE = "VALUE"
    MOST_RECENT = "MOST_RECENT"
    COMPARE = "COMPARE"
    TREND = "TREND"
    CORRELATED = "CORRELATED"
    RANKED = "RANKED"


class TrendDirection(str, Enum):
    UP = "UP"
    DOWN = "DOWN"
    NONE = "NONE"


@dataclass(frozen=True)
class PointPayload:
    """A single cell: its x label and value."""

    x: str
    value: float


@dataclass(frozen=True)
class AggregatePayload:
    """A whole-column aggregate, canonically rounded."""

    value: float


@dataclass(frozen=True)
class ComparePayload:
    lower_x: str
    lower_value: float
    higher_x: str
    higher_value: float


@dataclass(frozen=True)
class TrendPayload:
    direction: TrendDirection
    slope: float
    relative_change: float


@dataclass(frozen=True)
class CorrelationPayload:
    column_a: str
    column_b: str
    r: float


@dataclass(frozen=True)
class RankedPayload:
    """Top cells in descending value order, ties kept in row order."""

    entries: tuple[tuple[str, float], ...]


Payload = Union[
    PointPayload, AggregatePayload, ComparePayload,
    TrendPayload, CorrelationPayload, RankedPayload,
]


@dataclass(frozen=True)
class AnalysisResult:
    kind: AnalysisType
    y_column: str
    payload: Payload


def trend_stats(values: Sequence[float]) -> tuple[float, float]:
    """OLS slope over the row index and the span change relative to the mean."""
    if len(values) < 3:
        raise SeriesTooShort(f"trend needs >= 3 points, got {len(values)}")
    slope = statistics.linear_regression(range(len(values)), values).slope
    mean = statistics.fmean(values)
    relative = slope * (len(values) - 1) / max(abs(mean), TREND_EPSILON)
    return slope, relative


def trend_of(values: Sequence[float]) -> TrendDirection:
    """UP or DOWN when the fitted change spans at least 10% of the mean."""
    _, relative = trend_stats(values)
    if relative >= TREND_THRESHOLD:
        return TrendDirection.UP
    if relative <= -TREND_THRESHOLD:
        return TrendDirection.DOWN
    return TrendDirection.NONE


def correlation(a: Sequence[float], b: Sequence[float]) -> float:
    """Pearson's r; the caller guarantees equal lengths >= 3, non-constant."""
    if len(a) != len(b):
        raise LengthMismatch(f"series lengths differ: {len(a)} vs {len(b)}")
    if len(a) < 3:
        raise SeriesTooShort(f"correlation needs >= 3 points, got {len(a)}")
    try:
        return statistics.correlation(a, b)
    except statistics.StatisticsError as exc:
        raise ConstantSeries(str(exc)) from None


def _argmax_first(values: Sequence[float]) -> int:
    return values.index(max(values))


def _argmin_first(values: Sequence[float]) -> int:
    return values.index(min(values))


def compare_pair(table: DataTable, column: str, shape: TableShape | None = None) -> AnalysisResult:
    """Pick the two cells worth contrasting and orient them lower/higher.

    Time series compare the last two rows; other tables compare the two
    largest values. On a tie the earlier row counts as the lower side.
    """
    if shape is None:
        shape = detect_shape(table)
    col = table.column(column)
    if shape.is_time_series:
        i, j = table.n_rows - 2, table.n_rows - 1
    else:
        by_value = sorted(range(table.n_rows), key=lambda k: -col.values[k])
        i, j = sorted(by_value[:2])
    lower, higher = (i, j) if col.values[i] <= col.values[j] else (j, i)
    return AnalysisResult(
        kind=AnalysisType.COMPARE,
        y_column=column,
        payload=ComparePayload(
            lower_x=table.x_values[lower],
            lower_value=col.values[lower],
            higher_x=table.x_values[higher],
            higher_value=col.values[higher],
        ),
    )


def run_all(
    table: DataTable,
    shape: TableShape | None = None,
    correlation_threshold: float = CORRELATION_THRESHOLD,
) -> list[AnalysisResult]:
    """Every applicable analysis, ordered by column then by analysis type.

    MOST_RECENT is emitted only when the newest row is not also the last row
    (otherwise it would duplicate VALUE); TREND only for time series of three
    or more rows with a non-flat direction; CORRELATED only for multi-column
    tables when |r| clears the threshold.
    """
    if shape is None:
        shape = detect_shape(table)
    recent_idx = most_recent_index(table) if shape.is_time_series else None
    last = table.n_rows - 1
    names = [c.name for c in table.y_columns]

    results: list[AnalysisResult] = []
    for ci, col in enumerate(table.y_columns):
        values = col.values
        hi, lo = _argmax_first(values), _argmin_first(values)
        results.append(AnalysisResult(
            AnalysisType.MAX, col.name, PointPayload(table.x_values[hi], values[hi])))
        results.append(AnalysisResult(
            AnalysisType.MIN, col.name, PointPayload(table.x_values[lo], values[lo])))
        results.append(AnalysisResult(
            AnalysisType.SUM, col.name, AggregatePayload(round_half_even(sum(values), 2))))
        results.append(AnalysisResult(
            AnalysisType.AVERAGE, col.name,
            AggregatePayload(round_half_even(statistics.fmean(values), 2))))
        results.append(AnalysisResult(
            AnalysisType.VALUE, col.name, PointPayload(table.x_values[last], values[last])))
        if recent_idx is not None and recent_idx != last:
            results.append(AnalysisResult(
                AnalysisType.MOST_RECENT, col.name,
                PointPayload(table.x_values[recent_idx], values[recent_idx])))
        results.append(compare_pair(table, col.name, shape))
        if shape.is_time_series and table.n_rows >= 3:
            slope, relative = trend_stats(values)
            direction = trend_of(values)
            if direction is not TrendDirection.NONE:
                results.append(AnalysisResult(
                    AnalysisType.TREND, col.name,
                    TrendPayload(direction, slope, relative)))
        if shape.is_multi_column and table.n_rows >= 3:
            for cj in range(ci + 1, len(names)):
                other = table.y_columns[cj].values
                if len(set(values)) == 1 or len(set(other)) == 1:
                    continue
                r = correlation(values, other)
                if abs(r) >= correlation_threshold:
                    results.append(AnalysisResult(
                        AnalysisType.CORRELATED, col.name,
                        CorrelationPayload(col.name, names[cj], r)))
        depth = min(RANK_DEPTH, table.n_rows)
        order = sorted(range(table.n_rows), key=lambda k: -values[k])[:depth]
        results.append(AnalysisResult(
            AnalysisType.RANKED, col.name,
            RankedPayload(tuple((table.x_values[k], values[k]) for k in order))))
    return results
