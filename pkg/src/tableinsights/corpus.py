"""Corpus building: sentence/triple matching, dataset splits, and augmentation.

A webpage instance is a table plus its human-written summary. Every candidate
triple from the analytics pipeline is matched against every summary sentence;
a sentence matches a triple when it carries the triple's value and one of its
coordinates, and uses an indicator word of the triple's type. Matched pairs
feed the dataset splits; insight types that stay rare get few-shot
augmentation prompts built from same-type labeled pairs.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .analytics import AnalysisType, run_all
from .errors import (
    InsufficientContextPairs,
    LengthMismatch,
    TooFewPairs,
    ValidationError,
)
from .keywords import DOWN_WORDS, UP_WORDS, TypeDictionary, default_type_dictionary
from .rdf import (
    RdfTriple,
    TripleSet,
    cast,
    classify_predicate,
    infer_insight_type,
    is_title,
    linearize,
    parse_linear,
    predicate_column,
    title_triple,
)
from .table import DataTable, TableContext, detect_shape, x_range_label
from .textnum import (
    extract_number_mentions,
    is_number_token,
    mention_matches,
    tokenize,
    tokens_equal,
)

PROMPT_CONTEXT_SIZE = 5
PER_TYPE_CAP = 2500
LOW_PRIOR_THRESHOLD = 100
SPLIT_BASE = 59
SPLIT_HOLDOUT = 3

_ABBREVIATIONS = frozenset(
    ["U.S.", "U.K.", "U.N.", "E.U.", "a.m.", "p.m.", "e.g.", "i.e.", "etc.",
     "vs.", "Dr.", "Mr.", "Mrs.", "Ms.", "St.", "No.", "Fig.", "Inc.",
     "Ltd.", "Co.", "approx."]
)
_INITIAL_RE = re.compile(r"[A-Z]\.")
_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s+[A-Z])")


@dataclass(frozen=True)
class WebpageInstance:
    """One crawled chart page: the table, its context, and the prose summary."""

    table: DataTable
    ctx: TableContext
    summary: str


@dataclass(frozen=True)
class MatchedPair:
    """A summary sentence with every triple it was matched to."""

    sentence: str
    triples: TripleSet
    insight_types: frozenset[AnalysisType]


@dataclass(frozen=True)
class AugmentationPrompt:
    """Few-shot prompt: five same-type (RDF, insight) examples plus a target."""

    context_pairs: tuple[tuple[str, str], ...]
    target: str
    target_type: AnalysisType


def split_sentences(text: str) -> list[str]:
    """Period/question/bang boundaries followed by whitespace and a capital.

    Common abbreviations and single-letter initials do not end a sentence.
    Internal whitespace is collapsed so sentences are single-line.
    """
    pieces: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        chunk = text[:m.end()]
        words = chunk.split()
        token = words[-1] if words else chunk
        if token in _ABBREVIATIONS or _INITIAL_RE.fullmatch(token):
            continue
        pieces.append(text[start:m.end()])
        start = m.end()
    pieces.append(text[start:])
    return [" ".join(p.split()) for p in pieces if p.strip()]


def _tokens_present(slot_text: str, tokens: set[str]) -> bool:
    for token in tokenize(slot_text):
        if not any(tokens_equal(token, t) for t in tokens):
            return False
    return True


def _category_present(category: str, tokens: set[str], mentions) -> bool:
    if is_number_token(category):
        value = float(category)
        return any(mention_matches(value, m) for m in mentions) or category in tokens
    return _tokens_present(category, tokens)


def match(
    sentence: str,
    triple: RdfTriple,
    table: DataTable,
    type_words: TypeDictionary | None = None,
) -> bool:
    """True when the sentence carries the triple's content and type vocabulary.

    Condition 1 is content: the numeric value (exact, or rounded to however
    many decimals the sentence printed) together with the column or row name,
    inflection-tolerant. Condition 2 is an indicator word of the triple's
    type. Value-less triples (TREND, CORRELATED, COMPARE links) check their
    categorical fields instead of a number.
    """
    if is_title(triple):
        return False
    if type_words is None:
        type_words = default_type_dictionary()
    kind = classify_predicate(triple.predicate)
    tokens = set(tokenize(sentence))

    if not any(w in tokens for w in type_words[kind]):
        return False

    mentions = extract_number_mentions(sentence)
    column = predicate_column(triple.predicate)
    if column and column not in {c.name for c in table.y_columns}:
        # bare predicates must denote a real column; typed prefixes already do
        if kind is AnalysisType.VALUE:
            return False

    if kind is AnalysisType.CORRELATED:
        return (_tokens_present(triple.subject, tokens)
                and _tokens_present(triple.object, tokens))
    if kind is AnalysisType.TREND:
        directions = UP_WORDS if triple.object == "UP" else DOWN_WORDS
        return (_tokens_present(column, tokens)
                and any(w in tokens for w in directions))
    if kind is AnalysisType.COMPARE:
        return (_tokens_present(column, tokens)
                and _category_present(triple.subject, tokens, mentions)
                and _category_present(triple.object, tokens, mentions))

    if not is_number_token(triple.object):
        return False
    value = float(triple.object)
    value_ok = any(mention_matches(value, m) for m in mentions)
    name_ok = (_tokens_present(column, tokens)
               or _tokens_present(triple.subject, tokens))
    return value_ok and name_ok


def candidate_triple_sets(instance: WebpageInstance) -> list[TripleSet]:
    """Every triple set the pipeline would offer for this instance's table."""
    shape = detect_shape(instance.table)
    label = x_range_label(instance.table, shape)
    return [cast(r, instance.ctx, label) for r in run_all(instance.table, shape)]


def build_pairs(
    instance: WebpageInstance,
    type_words: TypeDictionary | None = None,
) -> list[MatchedPair]:
    """Match every summary sentence against every candidate triple.

    A sentence with at least one match becomes a pair carrying all matched
    triples (deduplicated, first-seen order) plus the title triple.
    """
    sets = candidate_triple_sets(instance)
    seen: dict[RdfTriple, None] = {}
    for ts in sets:
        for t in ts.triples:
            if not is_title(t) and t not in seen:
                seen[t] = None
    all_triples = list(seen)
    title = title_triple(instance.ctx)

    pairs: list[MatchedPair] = []
    for sentence in split_sentences(instance.summary):
        matched = [t for t in all_triples
                   if match(sentence, t, instance.table, type_words)]
        if not matched:
            continue
        kinds = frozenset(classify_predicate(t.predicate) for t in matched)
        triples = tuple(matched) + (title,)
        pairs.append(MatchedPair(
            sentence=sentence,
            triples=TripleSet(triples, infer_insight_type(tuple(matched))),
            insight_types=kinds,
        ))
    return pairs


def split_dataset(
    pairs: Sequence[MatchedPair],
    seed: int = 0,
) -> tuple[list[MatchedPair], list[MatchedPair], list[MatchedPair]]:
    """Seeded shuffle into train/test/validation at 53:3:3 proportions.

    Holdout sizes are n*3//59 each; train takes the remainder.
    """
    if len(pairs) < 3:
        raise TooFewPairs(f"need >= 3 pairs to split, got {len(pairs)}")
    shuffled = list(pairs)
    random.Random(seed).shuffle(shuffled)
    holdout = len(shuffled) * SPLIT_HOLDOUT // SPLIT_BASE
    n_train = len(shuffled) - 2 * holdout
    return (
        shuffled[:n_train],
        shuffled[n_train:n_train + holdout],
        shuffled[n_train + holdout:],
    )


def type_distribution(pairs: Sequence[MatchedPair]) -> dict[AnalysisType, int]:
    """How many pairs carry each type; multi-type pairs increment each."""
    counts: dict[AnalysisType, int] = {kind: 0 for kind in AnalysisType}
    for pair in pairs:
        for kind in pair.insight_types:
            counts[kind] += 1
    return counts


def low_prior_types(
    distribution: Mapping[AnalysisType, int],
    threshold: int = LOW_PRIOR_THRESHOLD,
) -> list[AnalysisType]:
    return [kind for kind in AnalysisType if distribution.get(kind, 0) < threshold]


def build_augmentation_prompts(
    labeled: Sequence[MatchedPair],
    unlabeled: Sequence[TripleSet],
    per_type_cap: int = PER_TYPE_CAP,
    low_prior_threshold: int = LOW_PRIOR_THRESHOLD,
    seed: int = 0,
) -> list[AugmentationPrompt]:
    """Prompts for every low-prior type that has unlabeled targets.

    Each prompt samples five distinct same-type labeled pairs as context.
    A low-prior type with targets but fewer than five labeled pairs is an
    error rather than a silently skipped type.
    """
    distribution = type_distribution(labeled)
    rng = random.Random(seed)
    prompts: list[AugmentationPrompt] = []
    for kind in low_prior_types(distribution, low_prior_threshold):
        targets = [ts for ts in unlabeled if ts.insight_type is kind][:per_type_cap]
        if not targets:
            continue
        pool = [p for p in labeled if kind in p.insight_types]
        if len(pool) < PROMPT_CONTEXT_SIZE:
            raise InsufficientContextPairs(
                f"{kind.value}: {len(pool)} labeled pairs, need {PROMPT_CONTEXT_SIZE}")
        for ts in targets:
            picked = rng.sample(pool, PROMPT_CONTEXT_SIZE)
            prompts.append(AugmentationPrompt(
                context_pairs=tuple((linearize(p.triples), p.sentence) for p in picked),
                target=linearize(ts),
                target_type=kind,
            ))
    return prompts


def render_prompt(prompt: AugmentationPrompt) -> str:
    blocks = [f"RDF: {lin}\nInsight: {text}\n\n" for lin, text in prompt.context_pairs]
    return "".join(blocks) + f"RDF: {prompt.target}\nInsight:"


def parse_prompt(text: str) -> AugmentationPrompt:
    """Inverse of render_prompt; the target type is re-inferred from its RDF."""
    blocks = text.split("\n\n")
    if len(blocks) < 2:
        raise ValidationError("prompt has no context blocks")
    context: list[tuple[str, str]] = []
    for block in blocks[:-1]:
        m = re.fullmatch(r"RDF: (.*)\nInsight: (.*)", block, re.DOTALL)
        if not m:
            raise ValidationError(f"malformed context block: {block!r}")
        context.append((m.group(1), m.group(2)))
    m = re.fullmatch(r"RDF: (.*)\nInsight:", blocks[-1], re.DOTALL)
    if not m:
        raise ValidationError(f"malformed target block: {blocks[-1]!r}")
    target = m.group(1)
    kind = parse_linear(target).insight_type
    if kind is None:
        raise ValidationError("target RDF carries no content triples")
    return AugmentationPrompt(tuple(context), target, kind)


def harvest_weak_labels(
    prompts: Sequence[AugmentationPrompt],
    responses: Sequence[str],
) -> list[MatchedPair]:
    """Pair model responses with their prompt targets as weak training data.

    A response is truncated at its first blank line (few-shot models tend to
    keep generating more blocks); blank results are dropped.
    """
    if len(prompts) != len(responses):
        raise LengthMismatch(
            f"{len(prompts)} prompts vs {len(responses)} responses")
    pairs: list[MatchedPair] = []
    for prompt, response in zip(prompts, responses):
        text = response.split("\n\n")[0].strip()
        if not text:
            continue
        decoded = parse_linear(prompt.target)
        pairs.append(MatchedPair(
            sentence=" ".join(text.split()),
            triples=TripleSet(decoded.triples, prompt.target_type),
            insight_types=frozenset({prompt.target_type}),
        ))
    return pairs


def pair_record(
    pair: MatchedPair,
    time_series: bool | None = None,
    multi_column: bool | None = None,
    subject: str | None = None,
) -> dict:
    """JSONL row for a pair; segment fields ride along when known."""
    record: dict = {
        "linearized": linearize(pair.triples),
        "text": pair.sentence,
        "types": sorted(kind.value for kind in pair.insight_types),
    }
    if time_series is not None:
        record["time_series"] = time_series
    if multi_column is not None:
        record["multi_column"] = multi_column
    if subject is not None:
        record["subject"] = subject
    return record


def pair_from_record(record: Mapping) -> MatchedPair:
    decoded = parse_linear(record["linearized"])
    kinds = frozenset(AnalysisType(v) for v in record["types"])
    return MatchedPair(sentence=record["text"], triples=decoded, insight_types=kinds)
