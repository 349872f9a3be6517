"""Segment priors, preference weights, and seeded insight recommendation.

Tables are segmented by (time series?, multi column?, subject); each segment
keeps an add-one-smoothed prior over the insight types applicable there.
Recommendation draws 4-6 distinct types without replacement proportionally
to the prior, picks the most extreme candidate per type, and orders the
picks by 0.7 * faithfulness + 0.3 * learned preference weight.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .analytics import AnalysisType, correlation, trend_stats
from .errors import NoCandidates, OutOfOrderEvents, ValidationError
from .realization import InsightCandidate
from .rdf import classify_predicate, is_title, predicate_column
from .table import DEFAULT_SUBJECTS, DataTable, TableContext, TableShape, normalize_subject

if TYPE_CHECKING:  # pragma: no cover
    from .corpus import MatchedPair

DEFAULT_WEIGHT = 0.5
FAITHFULNESS_SHARE = 0.7
PREFERENCE_SHARE = 0.3
MIN_DRAW, MAX_DRAW = 4, 6
PROB_TOLERANCE = 1e-9


class FeedbackAction(str, Enum):
    SHOWN = "SHOWN"
    SELECTED = "SELECTED"
    EDITED = "EDITED"
    REJECTED = "REJECTED"


@dataclass(frozen=True)
class FeedbackEvent:
    timestamp: float
    session_id: str
    insight_id: str
    insight_type: AnalysisType | None
    action: FeedbackAction

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "session_id": self.session_id,
            "insight_id": self.insight_id,
            "insight_type": self.insight_type.value if self.insight_type else None,
            "action": self.action.value,
        }

    @classmethod
    def from_dict(cls, raw: Mapping) -> "FeedbackEvent":
        kind = raw.get("insight_type")
        return cls(
            timestamp=float(raw["timestamp"]),
            session_id=raw["session_id"],
            insight_id=raw["insight_id"],
            insight_type=AnalysisType(kind) if kind else None,
            action=FeedbackAction(raw["action"]),
        )


@dataclass(frozen=True)
class SegmentKey:
    is_time_series: bool
    is_multi_column: bool
    subject: str

    def as_string(self) -> str:
        return f"{int(self.is_time_series)}|{int(self.is_multi_column)}|{self.subject}"

    @classmethod
    def from_string(cls, text: str) -> "SegmentKey":
        ts, mc, subject = text.split("|", 2)
        return cls(ts == "1", mc == "1", subject)


def segment_of(
    shape: TableShape,
    subject: str,
    subjects: tuple[str, ...] = DEFAULT_SUBJECTS,
) -> SegmentKey:
    return SegmentKey(
        is_time_series=shape.is_time_series,
        is_multi_column=shape.is_multi_column,
        subject=normalize_subject(subject, subjects),
    )


def applicable_types(key: SegmentKey) -> tuple[AnalysisType, ...]:
    """TREND and MOST_RECENT need a time series; CORRELATED needs >= 2 columns."""
    out = []
    for kind in AnalysisType:
        if kind in (AnalysisType.TREND, AnalysisType.MOST_RECENT) and not key.is_time_series:
            continue
        if kind is AnalysisType.CORRELATED and not key.is_multi_column:
            continue
        out.append(kind)
    return tuple(out)


@dataclass(frozen=True)
class TypePrior:
    segment: SegmentKey
    probs: Mapping[AnalysisType, float]

    def __post_init__(self):
        applicable = set(applicable_types(self.segment))
        total = 0.0
        for kind, p in self.probs.items():
            if p < 0:
                raise ValidationError(f"negative prior for {kind}")
            if p > 0 and kind not in applicable:
                raise ValidationError(f"{kind} is inapplicable in {self.segment}")
            total += p
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise ValidationError(f"prior sums to {total}, expected 1")


def all_segments(subjects: tuple[str, ...] = DEFAULT_SUBJECTS) -> list[SegmentKey]:
    return [
        SegmentKey(ts, mc, subject)
        for ts in (False, True)
        for mc in (False, True)
        for subject in subjects
    ]


def uniform_prior(segment: SegmentKey) -> TypePrior:
    kinds = applicable_types(segment)
    return TypePrior(segment, {k: 1.0 / len(kinds) for k in kinds})


def estimate_priors(
    pairs: Iterable[tuple["MatchedPair", SegmentKey]],
    subjects: tuple[str, ...] = DEFAULT_SUBJECTS,
) -> dict[SegmentKey, TypePrior]:
    """Add-one-smoothed per-segment type frequencies over the full segment grid.

    Each pair increments every insight type it carries (restricted to the
    types applicable in its segment); segments without data come out uniform.
    """
    counts: dict[SegmentKey, dict[AnalysisType, int]] = {}
    for pair, segment in pairs:
        bucket = counts.setdefault(segment, {})
        for kind in pair.insight_types:
            if kind in applicable_types(segment):
                bucket[kind] = bucket.get(kind, 0) + 1
    priors: dict[SegmentKey, TypePrior] = {}
    for segment in all_segments(subjects):
        kinds = applicable_types(segment)
        bucket = counts.get(segment, {})
        total = sum(bucket.values())
        priors[segment] = TypePrior(segment, {
            k: (bucket.get(k, 0) + 1) / (total + len(kinds)) for k in kinds
        })
    return priors


@dataclass(frozen=True)
class PreferenceModel:
    """Per-type selection odds with Laplace smoothing; unseen types sit at 0.5."""

    weights: Mapping[AnalysisType, float]
    event_count: int

    def weight(self, kind: AnalysisType | None) -> float:
        if kind is None:
            return DEFAULT_WEIGHT
        return self.weights.get(kind, DEFAULT_WEIGHT)


def update_preferences(events: Sequence[FeedbackEvent]) -> PreferenceModel:
    """Fold a feedback log into per-type weights (selected+1) / (shown+2).

    SHOWN, SELECTED, and REJECTED all count as a display; SELECTED also counts
    as a pick; EDITED is kept in the log but moves no counter. Events must be
    ordered by timestamp.
    """
    last = None
    shown: dict[AnalysisType, int] = {}
    selected: dict[AnalysisType, int] = {}
    for event in events:
        if last is not None and event.timestamp < last:
            raise OutOfOrderEvents(f"timestamp {event.timestamp} after {last}")
        last = event.timestamp
        if event.insight_type is None or event.action is FeedbackAction.EDITED:
            continue
        shown[event.insight_type] = shown.get(event.insight_type, 0) + 1
        if event.action is FeedbackAction.SELECTED:
            selected[event.insight_type] = selected.get(event.insight_type, 0) + 1
    weights = {
        kind: (selected.get(kind, 0) + 1) / (count + 2)
        for kind, count in shown.items()
    }
    return PreferenceModel(weights=weights, event_count=len(events))


def restrict_prior(prior: TypePrior, kinds: Iterable[AnalysisType]) -> TypePrior:
    keep = {k: prior.probs.get(k, 0.0) for k in kinds}
    total = sum(keep.values())
    if total <= 0:
        raise NoCandidates("no candidate type carries prior mass")
    return TypePrior(prior.segment, {k: p / total for k, p in keep.items()})


def sample_types(prior: TypePrior, k: int, rng: random.Random) -> list[AnalysisType]:
    """Draw k distinct types without replacement, proportional to the prior."""
    remaining = {kind: p for kind, p in prior.probs.items() if p > 0}
    order = list(AnalysisType)
    picks: list[AnalysisType] = []
    while len(picks) < k and remaining:
        total = sum(remaining.values())
        point = rng.random() * total
        acc = 0.0
        chosen = None
        for kind in sorted(remaining, key=order.index):
            acc += remaining[kind]
            if point < acc:
                chosen = kind
                break
        if chosen is None:
            chosen = max(remaining, key=lambda x: (remaining[x], -order.index(x)))
        picks.append(chosen)
        del remaining[chosen]
    return picks


def priors_to_json(priors: Mapping[SegmentKey, TypePrior]) -> dict:
    return {
        segment.as_string(): {k.value: p for k, p in prior.probs.items()}
        for segment, prior in priors.items()
    }


def priors_from_json(raw: Mapping) -> dict[SegmentKey, TypePrior]:
    out: dict[SegmentKey, TypePrior] = {}
    for key, probs in raw.items():
        segment = SegmentKey.from_string(key)
        out[segment] = TypePrior(segment, {AnalysisType(k): p for k, p in probs.items()})
    return out


def _triple_value(candidate: InsightCandidate) -> float:
    for t in candidate.triples.triples:
        if not is_title(t):
            try:
                return float(t.object)
            except ValueError:
                return 0.0
    return 0.0


def extremity(candidate: InsightCandidate, table: DataTable) -> float:
    """How striking a candidate is within its own type; higher is more."""
    kind = candidate.insight_type
    content = [t for t in candidate.triples.triples if not is_title(t)]
    if kind is AnalysisType.MAX:
        return _triple_value(candidate)
    if kind is AnalysisType.MIN:
        return -_triple_value(candidate)
    if kind is AnalysisType.COMPARE:
        values = []
        for t in content:
            if classify_predicate(t.predicate) is AnalysisType.VALUE:
                try:
                    values.append(float(t.object))
                except ValueError:
                    pass
        return abs(values[0] - values[1]) if len(values) == 2 else 0.0
    if kind is AnalysisType.TREND:
        column = predicate_column(content[0].predicate)
        _, relative = trend_stats(table.column(column).values)
        return abs(relative)
    if kind is AnalysisType.CORRELATED:
        a = table.column(content[0].subject).values
        b = table.column(content[0].object).values
        return abs(correlation(a, b))
    if kind is AnalysisType.RANKED:
        return _triple_value(candidate)
    return abs(_triple_value(candidate))


def _score(candidate: InsightCandidate, prefs: PreferenceModel, alpha: float) -> float:
    return (alpha * candidate.faithfulness
            + (1.0 - alpha) * prefs.weight(candidate.insight_type))


def _rescored(candidates: Sequence[InsightCandidate],
              prefs: PreferenceModel,
              alpha: float = FAITHFULNESS_SHARE) -> list[InsightCandidate]:
    scored = [replace(c, rec_score=_score(c, prefs, alpha)) for c in candidates]
    return sorted(scored, key=lambda c: -c.rec_score)


def recommend(
    table: DataTable,
    ctx: TableContext,
    candidates: Sequence[InsightCandidate],
    prior: TypePrior,
    prefs: PreferenceModel,
    seed: int,
    alpha: float = FAITHFULNESS_SHARE,
) -> list[InsightCandidate]:
    """Seeded draw of 4-6 type-distinct candidates, most extreme per type."""
    if not candidates:
        raise NoCandidates("no candidates to recommend from")
    by_type: dict[AnalysisType, list[InsightCandidate]] = {}
    for c in candidates:
        if c.insight_type is not None:
            by_type.setdefault(c.insight_type, []).append(c)
    supported = [k for k in by_type if prior.probs.get(k, 0.0) > 0]
    if not supported:
        raise NoCandidates("no candidate type carries prior mass")

    rng = random.Random(seed)
    k = min(rng.randint(MIN_DRAW, MAX_DRAW), len(supported))
    picks = sample_types(restrict_prior(prior, supported), k, rng)

    chosen: list[InsightCandidate] = []
    for kind in picks:
        pool = by_type[kind]
        best = pool[0]
        best_extremity = extremity(best, table)
        for c in pool[1:]:
            e = extremity(c, table)
            if e > best_extremity:
                best, best_extremity = c, e
        chosen.append(best)
    return _rescored(chosen, prefs, alpha)


def recommend_naive(
    candidates: Sequence[InsightCandidate],
    prefs: PreferenceModel | None = None,
    alpha: float = FAITHFULNESS_SHARE,
) -> list[InsightCandidate]:
    """No-prior baseline: every candidate, scored and sorted."""
    if prefs is None:
        prefs = PreferenceModel(weights={}, event_count=0)
    return _rescored(candidates, prefs, alpha)
