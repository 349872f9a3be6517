"""Deterministic faithfulness scoring of insight text against its triples.

Every non-title triple field is a slot that the text must support: numeric
slots through a number mention (exact, or rounded half-even to the mention's
printed precision), textual slots through token containment with
singular/plural tolerance. Type-prefixed predicates ("MAX Market cap") are
supported by any indicator word of that type, so "the maximum" vouches for
a MAX predicate. Numbers in the text that nothing in the triple set accounts
for are penalized as likely hallucinations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analytics import AnalysisType
from .errors import EmptyTripleSet
from .keywords import DOWN_WORDS, UP_WORDS, TypeDictionary, default_type_dictionary
from .rdf import TripleSet, classify_predicate, is_title, predicate_column
from .textnum import (
    NumberMention,
    STOPWORDS,
    extract_number_mentions,
    is_number_token,
    mention_matches,
    tokenize,
    tokens_equal,
)

UNSUPPORTED_NUMBER_PENALTY = 0.25


@dataclass(frozen=True)
class ClaimExtraction:
    """Verifiable claims surfaced by a text: numbers and entity tokens."""

    numbers: tuple[NumberMention, ...]
    entities: tuple[str, ...]


@dataclass(frozen=True)
class FaithfulnessReport:
    score: float
    supported_slots: int
    total_slots: int
    unsupported_numbers: tuple[str, ...]


def extract_claims(text: str) -> ClaimExtraction:
    numbers = tuple(extract_number_mentions(text))
    seen: list[str] = []
    for token in tokenize(text):
        if token in STOPWORDS or is_number_token(token):
            continue
        if token not in seen:
            seen.append(token)
    return ClaimExtraction(numbers=numbers, entities=tuple(seen))


def _as_number(field: str) -> float | None:
    return float(field) if is_number_token(field) else None


def _tokens_present(slot_text: str, text_tokens: set[str]) -> bool:
    for token in tokenize(slot_text):
        if any(tokens_equal(token, t) for t in text_tokens):
            continue
        return False
    return True


def _word_present(words: frozenset[str], text_tokens: set[str]) -> bool:
    return any(w in text_tokens for w in words)


def slot_support(
    text: str,
    ts: TripleSet,
    type_words: TypeDictionary | None = None,
) -> tuple[int, int, list[float]]:
    """(supported slots, total slots, numeric slot values) of text vs set.

    Raises EmptyTripleSet when the set has no non-title triples.
    """
    if type_words is None:
        type_words = default_type_dictionary()
    content = [t for t in ts.triples if not is_title(t)]
    if not content:
        raise EmptyTripleSet("no verifiable triples to score against")

    text_tokens = set(tokenize(text))
    mentions = extract_number_mentions(text)

    numeric_slots: list[float] = []
    supported = 0
    total = 0

    for triple in content:
        kind = classify_predicate(triple.predicate)
        for role, field in (("subject", triple.subject),
                            ("predicate", triple.predicate),
                            ("object", triple.object)):
            total += 1
            value = _as_number(field)
            if value is not None:
                numeric_slots.append(value)
                if any(mention_matches(value, m) for m in mentions):
                    supported += 1
                continue
            if role == "predicate" and kind is not AnalysisType.VALUE:
                words_ok = _word_present(type_words[kind], text_tokens)
                rest = predicate_column(triple.predicate)
                if words_ok and (not rest or _tokens_present(rest, text_tokens)):
                    supported += 1
                continue
            if role == "object" and kind is AnalysisType.TREND and field in ("UP", "DOWN"):
                directions = UP_WORDS if field == "UP" else DOWN_WORDS
                if _word_present(directions, text_tokens):
                    supported += 1
                continue
            if _tokens_present(field, text_tokens):
                supported += 1
    return supported, total, numeric_slots


def score(
    text: str,
    ts: TripleSet,
    type_words: TypeDictionary | None = None,
) -> FaithfulnessReport:
    """Score `text` against `ts`; 1.0 means every slot is supported.

    score = (supported / total) * (1 - 0.25 * unsupported_numbers), clamped
    to [0, 1]. A number is unsupported when it matches no numeric slot at
    its printed precision and nothing in any triple field (title included)
    accounts for it.
    """
    supported, total, numeric_slots = slot_support(text, ts, type_words)
    mentions = extract_number_mentions(text)

    field_texts = [f for t in ts.triples for f in t.as_list()]
    field_numbers = [
        float(tok) for f in field_texts for tok in tokenize(f) if is_number_token(tok)
    ]
    unsupported: list[str] = []
    for m in mentions:
        if any(mention_matches(v, m) for v in numeric_slots):
            continue
        if any(mention_matches(v, m) for v in field_numbers):
            continue
        if any(m.surface in f for f in field_texts):
            continue
        unsupported.append(m.surface)

    raw = (supported / total) * (1.0 - UNSUPPORTED_NUMBER_PENALTY * len(unsupported))
    final = max(0.0, min(1.0, raw))
    return FaithfulnessReport(
        score=final,
        supported_slots=supported,
        total_slots=total,
        unsupported_numbers=tuple(unsupported),
    )
