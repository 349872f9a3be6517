"""Table-to-candidates orchestration shared by the CLI and the service."""

from __future__ import annotations

from .analytics import CORRELATION_THRESHOLD, run_all
from .keywords import TypeDictionary
from .rdf import TripleSet, cast
from .realization import InsightCandidate, RealizerEndpoint, realize_all
from .table import DataTable, TableContext, detect_shape, x_range_label


def candidate_sets(
    table: DataTable,
    ctx: TableContext,
    correlation_threshold: float = CORRELATION_THRESHOLD,
) -> list[TripleSet]:
    """All applicable analyses for the table, cast to triples."""
    shape = detect_shape(table)
    label = x_range_label(table, shape)
    return [cast(r, ctx, label) for r in run_all(table, shape, correlation_threshold)]


def generate_candidates(
    table: DataTable,
    ctx: TableContext,
    endpoint: RealizerEndpoint | None = None,
    type_words: TypeDictionary | None = None,
    correlation_threshold: float = CORRELATION_THRESHOLD,
) -> list[InsightCandidate]:
    """Analyze, cast, realize, and score; deterministic for a fixed input."""
    return realize_all(candidate_sets(table, ctx, correlation_threshold), endpoint, type_words)
