"""Surface realization: deterministic templates and the remote realizer client.

Template realization works purely from the triples, interpolating field
surfaces verbatim, which is what makes it faithful by construction. The
remote realizer is an HTTP contract (POST {"linearized": ...} -> {"text":
...}); any remote failure falls back to the template and is logged, never
raised to the caller of realize_all.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import httpx

from .analytics import AnalysisType
from .errors import (
    MissingFixture,
    RealizerTimeout,
    RemoteRealizerError,
    UnknownType,
    ValidationError,
)
from .faithfulness import score as faithfulness_score
from .keywords import TypeDictionary
from .rdf import (
    RdfTriple,
    TripleSet,
    classify_predicate,
    is_title,
    linearize,
    predicate_column,
)

logger = logging.getLogger(__name__)


class InsightSource(str, Enum):
    TEMPLATE = "TEMPLATE"
    NEURAL = "NEURAL"
    USER_EDITED = "USER_EDITED"
    USER_ADDED = "USER_ADDED"


class RealizerMode(str, Enum):
    LIVE = "LIVE"
    FIXTURE = "FIXTURE"


@dataclass(frozen=True)
class InsightCandidate:
    """One realized insight with its provenance and scores."""

    id: str
    triples: TripleSet
    insight_type: AnalysisType | None
    text: str
    faithfulness: float
    rec_score: float
    source: InsightSource

    def __post_init__(self):
        if not 0.0 <= self.faithfulness <= 1.0:
            raise ValidationError(f"faithfulness out of range: {self.faithfulness}")
        if self.source is not InsightSource.USER_ADDED and not self.triples.triples:
            raise ValidationError("only USER_ADDED insights may have empty triples")


@dataclass
class RealizerEndpoint:
    """Remote realizer address, or a canned-response fixture for tests."""

    url: str = ""
    timeout: float = 5.0
    mode: RealizerMode = RealizerMode.LIVE
    fixture_path: Path | None = None
    _fixture: dict[str, str] | None = field(default=None, repr=False)

    def fixture_map(self) -> dict[str, str]:
        if self._fixture is None:
            if self.fixture_path is None:
                raise ValidationError("FIXTURE mode needs a fixture_path")
            mapping: dict[str, str] = {}
            for line in Path(self.fixture_path).read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                mapping[record["linearized"]] = record["text"]
            self._fixture = mapping
        return self._fixture


def _title_of(ts: TripleSet) -> str:
    for t in ts.triples:
        if is_title(t):
            return t.object
    raise ValidationError("triple set has no title triple")


def _content(ts: TripleSet) -> list[RdfTriple]:
    return [t for t in ts.triples if not is_title(t)]


def _join_ranked(parts: list[str]) -> str:
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + f", and {parts[-1]}"


def realize_template(ts: TripleSet) -> str:
    """One deterministic sentence from the triples, numbers verbatim."""
    kind = ts.insight_type
    if kind is None:
        raise UnknownType("cannot realize a title-only set")
    title = _title_of(ts)
    content = _content(ts)
    if not content:
        raise UnknownType("cannot realize a title-only set")

    if kind in (AnalysisType.MAX, AnalysisType.MIN):
        t = content[0]
        word = "maximum" if kind is AnalysisType.MAX else "minimum"
        col = predicate_column(t.predicate)
        return f"{title}: the {word} {col} was {t.object}, recorded in {t.subject}."
    if kind is AnalysisType.SUM:
        t = content[0]
        col = predicate_column(t.predicate)
        return f"{title}: the combined {col} across {t.subject} amounted to {t.object}."
    if kind is AnalysisType.AVERAGE:
        t = content[0]
        col = predicate_column(t.predicate)
        return f"{title}: the average {col} across {t.subject} was {t.object}."
    if kind is AnalysisType.VALUE:
        t = content[0]
        return f"{title}: {t.predicate} stood at {t.object} in {t.subject}."
    if kind is AnalysisType.MOST_RECENT:
        t = content[0]
        return f"{title}: the latest {t.predicate} reading was {t.object}, recorded in {t.subject}."
    if kind is AnalysisType.COMPARE:
        link = next(t for t in content
                    if classify_predicate(t.predicate) is AnalysisType.COMPARE)
        col = predicate_column(link.predicate)
        values = {t.subject: t.object for t in content if t is not link}
        lower_x, higher_x = link.subject, link.object
        return (f"{title}: {col} was {values[lower_x]} in {lower_x}, "
                f"compared with {values[higher_x]} in {higher_x}.")
    if kind is AnalysisType.TREND:
        t = content[0]
        col = predicate_column(t.predicate)
        word = "upward" if t.object == "UP" else "downward"
        return f"{title}: {col} showed an {word} trend over {t.subject}."
    if kind is AnalysisType.CORRELATED:
        t = content[0]
        return f"{title}: {t.subject} and {t.object} are strongly correlated."
    if kind is AnalysisType.RANKED:
        col = predicate_column(content[0].predicate)
        parts = [f"{t.object} in {t.subject}" for t in content]
        return f"{title}: the top {len(parts)} {col} values were {_join_ranked(parts)}."
    raise UnknownType(f"no template for {kind}")  # pragma: no cover - enum is closed


def realize_remote(ts: TripleSet, endpoint: RealizerEndpoint) -> str:
    """Ask the remote realizer for a sentence; raise on any failure."""
    line = linearize(ts)
    if endpoint.mode is RealizerMode.FIXTURE:
        try:
            return endpoint.fixture_map()[line]
        except KeyError:
            raise MissingFixture(f"no canned response for: {line!r}") from None
    try:
        response = httpx.post(endpoint.url, json={"linearized": line},
                              timeout=endpoint.timeout)
    except httpx.TimeoutException as exc:
        raise RealizerTimeout(str(exc)) from None
    except httpx.HTTPError as exc:
        raise RemoteRealizerError(str(exc)) from None
    if response.status_code != 200:
        raise RemoteRealizerError(f"realizer answered {response.status_code}")
    try:
        text = response.json()["text"]
    except (KeyError, ValueError) as exc:
        raise RemoteRealizerError(f"malformed realizer response: {exc}") from None
    if not isinstance(text, str) or not text.strip():
        raise RemoteRealizerError("realizer returned empty text")
    return text


def candidate_id(ts: TripleSet) -> str:
    return hashlib.sha1(linearize(ts).encode("utf-8")).hexdigest()[:12]


def realize_all(
    sets: list[TripleSet],
    endpoint: RealizerEndpoint | None = None,
    type_words: TypeDictionary | None = None,
) -> list[InsightCandidate]:
    """Realize every set, falling back to templates when the remote fails."""
    candidates: list[InsightCandidate] = []
    for ts in sets:
        text, source = None, InsightSource.TEMPLATE
        if endpoint is not None:
            try:
                text = realize_remote(ts, endpoint)
                source = InsightSource.NEURAL
            except (RealizerTimeout, RemoteRealizerError, MissingFixture) as exc:
                logger.warning("remote realization failed, using template: %s", exc)
        if text is None:
            text = realize_template(ts)
        report = faithfulness_score(text, ts, type_words)
        candidates.append(InsightCandidate(
            id=candidate_id(ts),
            triples=ts,
            insight_type=ts.insight_type,
            text=text,
            faithfulness=report.score,
            rec_score=0.0,
            source=source,
        ))
    return candidates


def with_text(candidate: InsightCandidate, text: str,
              source: InsightSource, type_words: TypeDictionary | None = None) -> InsightCandidate:
    """A copy of `candidate` carrying new text, re-scored against its triples."""
    if not text.strip():
        raise ValidationError("insight text must be non-empty")
    report = faithfulness_score(text, candidate.triples, type_words)
    return replace(candidate, text=text, source=source, faithfulness=report.score)
