"""Casting analysis results into RDF triples and the flat wire encoding.

The wire format joins the three fields of a triple with " [W] " and joins
triples with " [B] ". Those two bracketed tokens are reserved: a field that
contains either one is a hard error, there is no escaping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .analytics import (
    AggregatePayload,
    AnalysisResult,
    AnalysisType,
    ComparePayload,
    CorrelationPayload,
    PointPayload,
    RankedPayload,
    TrendPayload,
    TrendDirection,
)
from .errors import MalformedTriple, ReservedTokenInField, ValidationError
from .table import TableContext
from .textnum import format_number

WITHIN = "[W]"
BETWEEN = "[B]"
_WITHIN_SEP = f" {WITHIN} "
_BETWEEN_SEP = f" {BETWEEN} "

TITLE_SUBJECT = "CONTEXT"
TITLE_PREDICATE = "TITLE"

_RANK_RE = re.compile(r"^RANK_(\d+) ")

_PREFIXED = (
    ("MAX ", AnalysisType.MAX),
    ("MIN ", AnalysisType.MIN),
    ("SUM ", AnalysisType.SUM),
    ("AVERAGE ", AnalysisType.AVERAGE),
    ("COMPARE ", AnalysisType.COMPARE),
    ("TREND ", AnalysisType.TREND),
)


def _check_field(value: str) -> str:
    if WITHIN in value or BETWEEN in value:
        raise ReservedTokenInField(f"field contains a reserved token: {value!r}")
    if not value:
        raise ValidationError("triple fields must be non-empty")
    return value


@dataclass(frozen=True)
class RdfTriple:
    subject: str
    predicate: str
    object: str

    def __post_init__(self):
        _check_field(self.subject)
        _check_field(self.predicate)
        _check_field(self.object)

    def as_list(self) -> list[str]:
        return [self.subject, self.predicate, self.object]


@dataclass(frozen=True)
class TripleSet:
    """Ordered triples for one insight; insight_type is None for title-only sets."""

    triples: tuple[RdfTriple, ...]
    insight_type: AnalysisType | None = None


def is_title(triple: RdfTriple) -> bool:
    return triple.subject == TITLE_SUBJECT and triple.predicate == TITLE_PREDICATE


def classify_predicate(predicate: str) -> AnalysisType:
    """Map a predicate surface onto its analysis type; bare names are VALUE."""
    for prefix, kind in _PREFIXED:
        if predicate.startswith(prefix):
            return kind
    if predicate == "CORRELATED":
        return AnalysisType.CORRELATED
    if _RANK_RE.match(predicate):
        return AnalysisType.RANKED
    return AnalysisType.VALUE


def predicate_column(predicate: str) -> str:
    """The column-name remainder of a predicate, after any type prefix."""
    for prefix, _ in _PREFIXED:
        if predicate.startswith(prefix):
            return predicate[len(prefix):]
    m = _RANK_RE.match(predicate)
    if m:
        return predicate[m.end():]
    if predicate == "CORRELATED":
        return ""
    return predicate


def infer_insight_type(triples: tuple[RdfTriple, ...]) -> AnalysisType | None:
    """Classify a whole set from its predicates.

    COMPARE sets also carry two bare value triples, so a COMPARE predicate
    wins outright; otherwise the earliest type in enum order is used. A set
    of only title triples classifies as None. Because VALUE and MOST_RECENT
    share the bare-predicate shape, MOST_RECENT is not recoverable here and
    collapses to VALUE.
    """
    kinds = [classify_predicate(t.predicate) for t in triples if not is_title(t)]
    if not kinds:
        return None
    if AnalysisType.COMPARE in kinds:
        return AnalysisType.COMPARE
    order = list(AnalysisType)
    return min(kinds, key=order.index)


def title_triple(ctx: TableContext) -> RdfTriple:
    return RdfTriple(TITLE_SUBJECT, TITLE_PREDICATE, ctx.title)


def cast(result: AnalysisResult, ctx: TableContext, range_label: str) -> TripleSet:
    """Encode one analysis result as triples, title appended last."""
    kind, col, payload = result.kind, result.y_column, result.payload
    triples: list[RdfTriple]
    if kind in (AnalysisType.MAX, AnalysisType.MIN):
        assert isinstance(payload, PointPayload)
        triples = [RdfTriple(payload.x, f"{kind.value} {col}", format_number(payload.value))]
    elif kind in (AnalysisType.SUM, AnalysisType.AVERAGE):
        assert isinstance(payload, AggregatePayload)
        triples = [RdfTriple(range_label, f"{kind.value} {col}", format_number(payload.value))]
    elif kind in (AnalysisType.VALUE, AnalysisType.MOST_RECENT):
        assert isinstance(payload, PointPayload)
        triples = [RdfTriple(payload.x, col, format_number(payload.value))]
    elif kind is AnalysisType.COMPARE:
        assert isinstance(payload, ComparePayload)
        triples = [
            RdfTriple(payload.higher_x, col, format_number(payload.higher_value)),
            RdfTriple(payload.lower_x, col, format_number(payload.lower_value)),
            RdfTriple(payload.lower_x, f"COMPARE {col}", payload.higher_x),
        ]
    elif kind is AnalysisType.TREND:
        assert isinstance(payload, TrendPayload)
        if payload.direction is TrendDirection.NONE:
            raise ValidationError("a flat trend has no triple form")
        triples = [RdfTriple(range_label, f"TREND {col}", payload.direction.value)]
    elif kind is AnalysisType.CORRELATED:
        assert isinstance(payload, CorrelationPayload)
        triples = [RdfTriple(payload.column_b, "CORRELATED", payload.column_a)]
    elif kind is AnalysisType.RANKED:
        assert isinstance(payload, RankedPayload)
        triples = [
            RdfTriple(x, f"RANK_{i} {col}", format_number(v))
            for i, (x, v) in enumerate(payload.entries, start=1)
        ]
    else:  # pragma: no cover - enum is closed
        raise ValidationError(f"cannot cast {kind}")
    triples.append(title_triple(ctx))
    return TripleSet(triples=tuple(triples), insight_type=kind)


def linearize(ts: TripleSet) -> str:
    """Flatten to the wire string; fields are validated at triple construction."""
    return _BETWEEN_SEP.join(_WITHIN_SEP.join(t.as_list()) for t in ts.triples)


def parse_linear(text: str) -> TripleSet:
    """Exact inverse of linearize on its image.

    The insight type is re-derived from the predicates via infer_insight_type,
    so a cast MOST_RECENT set decodes with VALUE type (same triples).
    """
    triples: list[RdfTriple] = []
    for chunk in text.split(_BETWEEN_SEP):
        fields = chunk.split(_WITHIN_SEP)
        if len(fields) != 3 or any(not f for f in fields):
            raise MalformedTriple(f"expected 3 non-empty fields, got {fields!r}")
        triples.append(RdfTriple(*fields))
    return TripleSet(triples=tuple(triples), insight_type=infer_insight_type(tuple(triples)))
