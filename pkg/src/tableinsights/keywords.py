"""Indicator vocabularies for insight types and trend directions.

The per-type word lists drive two checks: sentence-to-triple matching in the
corpus builder and predicate support in the faithfulness scorer. They ship as
an editable JSON config; the defaults below seed that config.
"""

from __future__ import annotations

import json
from pathlib import Path

from .analytics import AnalysisType
from .errors import ValidationError

TypeDictionary = dict[AnalysisType, frozenset[str]]

DEFAULT_TYPE_WORDS: dict[AnalysisType, frozenset[str]] = {
    AnalysisType.MAX: frozenset(
        ["highest", "largest", "peaked", "leading", "maximum", "max", "biggest", "greatest"]
    ),
    AnalysisType.MIN: frozenset(
        ["lowest", "smallest", "minimum", "min", "least", "weakest", "bottom"]
    ),
    AnalysisType.SUM: frozenset(
        ["total", "sum", "summed", "combined", "altogether", "overall", "cumulative"]
    ),
    AnalysisType.AVERAGE: frozenset(
        ["average", "averaged", "mean", "avg", "typically", "typical"]
    ),
    AnalysisType.VALUE: frozenset(
        ["stood", "amounted", "recorded", "reached", "measured", "registered", "value"]
    ),
    AnalysisType.MOST_RECENT: frozenset(
        ["recent", "latest", "newest", "freshest"]
    ),
    AnalysisType.COMPARE: frozenset(
        ["compared", "comparison", "versus", "vs", "exceeded", "surpassed",
         "trailed", "outpaced", "against"]
    ),
    AnalysisType.TREND: frozenset(
        ["peak", "grew", "decline", "declined", "decrease", "decreased", "drop",
         "dropped", "trend", "upward", "downward", "rose", "fell", "climbed",
         "growth", "shrank", "slid"]
    ),
    AnalysisType.CORRELATED: frozenset(
        ["correlated", "correlation", "correlates", "correlate", "linked", "tandem"]
    ),
    AnalysisType.RANKED: frozenset(
        ["top", "rank", "ranked", "ranking", "runner", "second", "third"]
    ),
}

UP_WORDS = frozenset(
    ["up", "upward", "upwards", "rose", "rise", "rising", "grew", "growing",
     "growth", "increase", "increased", "increasing", "climbed", "climbing",
     "gained", "higher"]
)

DOWN_WORDS = frozenset(
    ["down", "downward", "downwards", "fell", "fall", "falling", "decline",
     "declined", "declining", "decrease", "decreased", "decreasing", "drop",
     "dropped", "dropping", "shrank", "slid", "lower"]
)


def default_type_dictionary() -> TypeDictionary:
    return dict(DEFAULT_TYPE_WORDS)


def load_type_dictionary(path: str | Path) -> TypeDictionary:
    """Read a {type: [word, ...]} JSON file and validate it.

    Every insight type must be present with at least three lowercase words.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    out: TypeDictionary = {}
    for kind in AnalysisType:
        words = raw.get(kind.value)
        if not words or len(words) < 3:
            raise ValidationError(f"type dictionary needs >= 3 words for {kind.value}")
        lowered = frozenset(w.lower() for w in words)
        if any(w != w.lower() for w in words):
            raise ValidationError(f"type dictionary words must be lowercase ({kind.value})")
        out[kind] = lowered
    return out


def dump_type_dictionary(dictionary: TypeDictionary, path: str | Path) -> None:
    payload = {kind.value: sorted(words) for kind, words in dictionary.items()}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
