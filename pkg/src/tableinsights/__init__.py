"""Insight generation for tabular business data.

Parses small numeric tables, runs a fixed family of analyses over them,
casts the results to RDF-style triples, realizes the triples as natural
language, scores each sentence for faithfulness against its triples, and
recommends a diverse subset that can be fused into a short table report.
Also ships the corpus-construction and evaluation tooling used to train
and measure neural realizers.
"""

from .analytics import AnalysisResult, AnalysisType, TrendDirection, run_all
from .errors import InsightError
from .faithfulness import FaithfulnessReport, score as faithfulness_score
from .fusion import Report, ReportFormat, export, fuse
from .pipeline import candidate_sets, generate_candidates
from .realization import (
    InsightCandidate,
    InsightSource,
    RealizerEndpoint,
    realize_template,
)
from .rdf import RdfTriple, TripleSet, cast, linearize, parse_linear
from .recommend import (
    FeedbackAction,
    FeedbackEvent,
    PreferenceModel,
    TypePrior,
    estimate_priors,
    recommend,
    recommend_naive,
    update_preferences,
)
from .table import (
    ChartKind,
    DataTable,
    TableContext,
    TableShape,
    detect_shape,
    parse_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "AnalysisType",
    "ChartKind",
    "DataTable",
    "FaithfulnessReport",
    "FeedbackAction",
    "FeedbackEvent",
    "InsightCandidate",
    "InsightError",
    "InsightSource",
    "PreferenceModel",
    "RdfTriple",
    "RealizerEndpoint",
    "Report",
    "ReportFormat",
    "TableContext",
    "TableShape",
    "TrendDirection",
    "TripleSet",
    "TypePrior",
    "candidate_sets",
    "cast",
    "detect_shape",
    "estimate_priors",
    "export",
    "faithfulness_score",
    "fuse",
    "generate_candidates",
    "linearize",
    "parse_csv",
    "parse_linear",
    "realize_template",
    "recommend",
    "recommend_naive",
    "run_all",
    "update_preferences",
    "__version__",
]
