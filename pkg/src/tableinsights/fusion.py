"""Fusing selected insights into a one-paragraph report.

Sentences are ordered by what they say, not by selection order: current
values first, then extremes and rankings, then comparisons/trends/
correlations, then aggregates. The table title opens the paragraph once;
later sentences drop their own title prefix and get a cycling connective.
Sentence content is never rewritten beyond that - numbers and entities
stay exactly where the candidate put them.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .analytics import AnalysisType
from .errors import EmptySelection, ValidationError
from .realization import InsightCandidate
from .table import TableContext

CONNECTIVES = ("Moreover,", "In addition,", "Notably,")

_GROUPS = (
    frozenset({AnalysisType.VALUE, AnalysisType.MOST_RECENT}),
    frozenset({AnalysisType.MAX, AnalysisType.MIN, AnalysisType.RANKED}),
    frozenset({AnalysisType.COMPARE, AnalysisType.TREND, AnalysisType.CORRELATED}),
    frozenset({AnalysisType.SUM, AnalysisType.AVERAGE}),
)


class ReportFormat(str, Enum):
    PLAIN = "plain"
    MARKDOWN = "markdown"


@dataclass(frozen=True)
class Report:
    id: str
    title: str
    body: str
    insight_ids: tuple[str, ...]
    created_at: float


def _group_index(candidate: InsightCandidate) -> int:
    for i, group in enumerate(_GROUPS):
        if candidate.insight_type in group:
            return i
    return len(_GROUPS)  # user-added insights without a type close the report


def order_selection(selected: Sequence[InsightCandidate]) -> list[InsightCandidate]:
    """Stable content-priority ordering of the selection."""
    return sorted(selected, key=_group_index)


def _normalize_terminal(text: str) -> str:
    s = text.strip()
    while s and s[-1] in ".!?":
        s = s[:-1].rstrip()
    return s + "."


def compose_sentences(selected: Sequence[InsightCandidate], ctx: TableContext) -> list[str]:
    """The report's sentences in final order, connectives applied."""
    if not selected:
        raise EmptySelection("cannot fuse an empty selection")
    ordered = order_selection(selected)
    prefix = f"{ctx.title}:"
    sentences: list[str] = []
    for i, candidate in enumerate(ordered):
        s = _normalize_terminal(candidate.text)
        if i > 0:
            if s.startswith(prefix):
                s = s[len(prefix):].lstrip()
            if not s or s == ".":
                raise ValidationError(f"insight {candidate.id} has no content beyond the title")
            s = f"{CONNECTIVES[(i - 1) % len(CONNECTIVES)]} {s}"
        sentences.append(s)
    return sentences


def fuse(selected: Sequence[InsightCandidate], ctx: TableContext) -> Report:
    sentences = compose_sentences(selected, ctx)
    ordered = order_selection(selected)
    ids = tuple(c.id for c in ordered)
    digest = hashlib.sha1("\x00".join((ctx.title,) + ids).encode("utf-8")).hexdigest()[:12]
    return Report(
        id=digest,
        title=ctx.title,
        body=" ".join(sentences),
        insight_ids=ids,
        created_at=time.time(),
    )


def export(report: Report, fmt: ReportFormat = ReportFormat.PLAIN) -> bytes:
    """Render for download; bodies are identical across formats."""
    if fmt is ReportFormat.MARKDOWN:
        text = f"# {report.title}\n\n{report.body}\n"
    else:
        text = f"{report.title}\n\n{report.body}\n"
    return text.encode("utf-8")
