"""Generate the labeled sentence-matching corpus shipped in package data.

Each emitted sentence is built from a paraphrase frame that controls its
vocabulary: it contains an indicator word for exactly the intended insight
types, the intended numeric values, and the intended column or row names,
and nothing that could legitimately trigger any other candidate triple of
the same table. That discipline is asserted mechanically below, so the
labels are correct by construction rather than by running the matcher.

Frames are deliberately disjoint from the realization templates.

Usage: python3 scripts/make_gold_corpus.py [out.jsonl]
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

from tableinsights.analytics import AnalysisType
from tableinsights.corpus import WebpageInstance, candidate_triple_sets, split_sentences
from tableinsights.keywords import DEFAULT_TYPE_WORDS, DOWN_WORDS, UP_WORDS
from tableinsights.rdf import RdfTriple, classify_predicate, is_title, predicate_column
from tableinsights.table import DataTable, TableContext, YColumn
from tableinsights.textnum import (
    extract_number_mentions,
    format_number,
    mention_matches,
    tokenize,
    tokens_equal,
)

COLUMNS = [
    "Market cap", "Net sales", "Profit", "Revenue", "Exports", "Attendance",
    "Output", "Headcount", "Rainfall", "Enrollment", "Tonnage", "Visitors",
]
CITIES = ["Madrid", "Rome", "Berlin", "Oslo", "Lisbon", "Prague", "Vienna",
          "Dublin", "Porto", "Ghent"]
SUBJECTS = ["economy", "retail", "agriculture", "tourism", "energy",
            "demographics", "manufacturing", "sports"]

# frame(col, value(s), coordinate(s)) -> sentence text
MAX_FRAMES = [
    "The largest {c} on record, {v}, came in {x}.",
    "{c} peaked at {v} in {x}.",
    "At {v}, {x} delivered the highest {c} of the period.",
    "The greatest {c}, {v}, belongs to {x}.",
]
MIN_FRAMES = [
    "The smallest {c} reading, {v}, belongs to {x}.",
    "{c} hit bottom at {v} in {x}.",
    "At just {v}, {x} marks the lowest {c}.",
    "The weakest {c} figure was {v}, back in {x}.",
]
SUM_FRAMES = [
    "Across the period, {c} summed to {v}.",
    "Combined {c} came to {v}.",
    "Altogether, {c} added up to {v}.",
    "Total {c} for the whole span was {v}.",
]
AVERAGE_FRAMES = [
    "On average, {c} ran at {v}.",
    "The mean {c} worked out to {v}.",
    "{c} averaged {v} over the stretch.",
    "The typical {c} figure was {v}.",
]
VALUE_FRAMES = [
    "For {x}, {c} registered {v}.",
    "In {x}, {c} stood at {v}.",
    "{c} amounted to {v} for {x}.",
    "The {x} figure for {c} measured {v}.",
]
COMPARE_FRAMES = [
    "{c} in {xl} trailed {xh}, {vl} against {vh}.",
    "{xh} outpaced {xl} on {c}, {vh} versus {vl}.",
    "Compared with {xh}, {xl} posted softer {c}.",
    "{c} for {xl} was {vl}, surpassed by the {vh} of {xh}.",
]
TREND_UP_FRAMES = [
    "The {c} trend across {r} pointed upward.",
    "{c} grew steadily over {r}.",
    "Over {r}, {c} climbed.",
]
TREND_DOWN_FRAMES = [
    "{c} declined over {r}.",
    "Across {r}, {c} slid.",
    "The {r} stretch saw {c} drop.",
]
CORRELATED_FRAMES = [
    "{a} and {b} moved in tandem.",
    "{a} correlates strongly with {b}.",
    "The data shows {a} and {b} tightly linked.",
]
RANKED_FRAMES = [
    "Ranked by {c}, it goes {x1} at {v1}, {x2} at {v2}, {x3} at {v3}.",
    "The top three {c} figures were {v1} in {x1}, {v2} in {x2}, and {v3} in {x3}.",
    "{c} ranking has {x1} in front with {v1}, then {x2} with {v2}, then {x3} with {v3}.",
]
NEGATIVE_FRAMES = [
    "The chart follows {c} across the whole period.",
    "Nothing in the {c} series surprised anyone this time.",
    "{c} was {v} in {x}.",
    "Observers had expected a much stronger showing from {c}.",
]

_ALL_DICT_WORDS = {w for ws in DEFAULT_TYPE_WORDS.values() for w in ws}


def _dict_hits(sentence: str) -> set[AnalysisType]:
    tokens = set(tokenize(sentence))
    hits = set()
    for kind, words in DEFAULT_TYPE_WORDS.items():
        if any(any(tokens_equal(t, w) for t in tokens) for w in words):
            hits.add(kind)
    return hits


def _tokens_present(text: str, tokens: set[str]) -> bool:
    return all(any(tokens_equal(t, s) for t in tokens) for s in tokenize(text))


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def _should_match(sentence: str, triple: RdfTriple) -> bool:
    """Independent transcription of the documented matching rules.

    Written against the rules, not against the matcher, so the two can
    disagree when either has a bug.
    """
    tokens = set(tokenize(sentence))
    kind = classify_predicate(triple.predicate)
    if kind not in _dict_hits(sentence):
        return False
    mentions = extract_number_mentions(sentence)
    column = predicate_column(triple.predicate)

    def category_ok(cat: str) -> bool:
        if _is_number(cat):
            return (any(mention_matches(float(cat), m) for m in mentions)
                    or cat in tokens)
        return _tokens_present(cat, tokens)

    if kind is AnalysisType.CORRELATED:
        return _tokens_present(triple.subject, tokens) and _tokens_present(triple.object, tokens)
    if kind is AnalysisType.TREND:
        directions = UP_WORDS if triple.object == "UP" else DOWN_WORDS
        return _tokens_present(column, tokens) and bool(tokens & directions)
    if kind is AnalysisType.COMPARE:
        return (_tokens_present(column, tokens)
                and category_ok(triple.subject) and category_ok(triple.object))
    if not _is_number(triple.object):
        return False
    return (any(mention_matches(float(triple.object), m) for m in mentions)
            and (_tokens_present(column, tokens)
                 or _tokens_present(triple.subject, tokens)))


def _check(sentence: str, intended: list[RdfTriple], pool: list[RdfTriple]) -> None:
    """Assert that the rules decide exactly the intended label set."""
    decided = [t for t in pool if _should_match(sentence, t)]
    assert set(decided) == set(intended), (
        f"{sentence!r}: rules decide {decided} vs intended {intended}")


def _pool(instance: WebpageInstance) -> list[RdfTriple]:
    seen: dict[RdfTriple, None] = {}
    for ts in candidate_triple_sets(instance):
        for t in ts.triples:
            if not is_title(t):
                seen.setdefault(t, None)
    return list(seen)


def _by_predicate(pool: list[RdfTriple], predicate: str) -> RdfTriple:
    for t in pool:
        if t.predicate == predicate:
            return t
    raise LookupError(predicate)


def _distinct_values(rng: random.Random, n: int) -> list[float]:
    """Values whose 2dp prints stay distinct even after summing/averaging."""
    while True:
        values = [round(rng.uniform(10.0, 340.0), 1) for _ in range(n)]
        derived = values + [round(sum(values), 2), round(sum(values) / n, 2)]
        prints = [format_number(v) for v in derived]
        if len(set(prints)) == len(prints) and len({round(v) for v in derived}) == len(derived):
            return values


def _make_table(rng: random.Random, time_series: bool, n_cols: int) -> DataTable:
    n = rng.randint(3, 5)
    if time_series:
        start = rng.randint(1991, 2015)
        xs = tuple(str(start + i) for i in range(n))
    else:
        xs = tuple(rng.sample(CITIES, n))
    columns = []
    names = rng.sample(COLUMNS, n_cols)
    base = sorted(_distinct_values(rng, n), reverse=rng.random() < 0.5)
    if not time_series:
        rng.shuffle(base)
    columns.append(YColumn(names[0], tuple(base)))
    if n_cols == 2:
        # linear multiple keeps |r| = 1 while staying print-distinct
        second = [round(v * 2.0 + 7.3, 2) for v in base]
        columns.append(YColumn(names[1], tuple(second)))
    return DataTable(
        x_name="Year" if time_series else "City",
        x_values=xs,
        y_columns=tuple(columns),
    )


def _instance_sentences(rng: random.Random, instance: WebpageInstance):
    table = instance.table
    pool = _pool(instance)
    col = table.y_columns[0].name
    sentences: list[tuple[str, list[RdfTriple]]] = []

    def render(frames, triples, **kw):
        # the splitter needs a capital after the boundary, so a sentence
        # can't open with a year
        texts = [f.format(**kw) for f in frames]
        sentence = rng.choice([t for t in texts if t[0].isalpha() and t[0].isupper()])
        _check(sentence, triples, pool)
        sentences.append((sentence, triples))

    t_max = _by_predicate(pool, f"MAX {col}")
    render(MAX_FRAMES, [t_max], c=col, v=t_max.object, x=t_max.subject)
    t_min = _by_predicate(pool, f"MIN {col}")
    render(MIN_FRAMES, [t_min], c=col, v=t_min.object, x=t_min.subject)
    t_sum = _by_predicate(pool, f"SUM {col}")
    render(SUM_FRAMES, [t_sum], c=col, v=t_sum.object)
    t_avg = _by_predicate(pool, f"AVERAGE {col}")
    render(AVERAGE_FRAMES, [t_avg], c=col, v=t_avg.object)

    t_cmp = _by_predicate(pool, f"COMPARE {col}")
    lower_x, higher_x = t_cmp.subject, t_cmp.object
    lower_v = next(t.object for t in pool
                   if t.predicate == col and t.subject == lower_x)
    higher_v = next(t.object for t in pool
                    if t.predicate == col and t.subject == higher_x)
    render(COMPARE_FRAMES, [t_cmp],
           c=col, xl=lower_x, xh=higher_x, vl=lower_v, vh=higher_v)

    # the bare point triple doubles as the VALUE insight
    value_triples = [t for t in pool if t.predicate == col]
    t_val = rng.choice(value_triples)
    render(VALUE_FRAMES, [t_val], c=col, v=t_val.object, x=t_val.subject)

    trend = [t for t in pool if t.predicate == f"TREND {col}"]
    if trend:
        frames = TREND_UP_FRAMES if trend[0].object == "UP" else TREND_DOWN_FRAMES
        render(frames, trend, c=col, r=trend[0].subject)

    correlated = [t for t in pool if t.predicate == "CORRELATED"]
    if correlated:
        render(CORRELATED_FRAMES, correlated,
               a=correlated[0].subject, b=correlated[0].object)

    ranked = [t for t in pool if t.predicate.startswith("RANK_")
              and t.predicate.endswith(col)]
    ranked.sort(key=lambda t: t.predicate)
    if len(ranked) == 3:
        render(RANKED_FRAMES, ranked, c=col,
               x1=ranked[0].subject, v1=ranked[0].object,
               x2=ranked[1].subject, v2=ranked[1].object,
               x3=ranked[2].subject, v3=ranked[2].object)

    neg = rng.sample(NEGATIVE_FRAMES, 2)
    for frame in neg:
        sentence = frame.format(c=col, v=t_val.object, x=t_val.subject)
        _check(sentence, [], pool)
        sentences.append((sentence, []))

    rng.shuffle(sentences)
    return sentences


def build(seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    shapes = [(True, 1)] * 8 + [(False, 2)] * 6 + [(True, 2)] * 6
    records = []
    for i, (time_series, n_cols) in enumerate(shapes):
        table = _make_table(rng, time_series, n_cols)
        subject = rng.choice(SUBJECTS)
        title = f"{table.y_columns[0].name} by {table.x_name.lower()}, series {i + 1}"
        instance = WebpageInstance(
            table=table,
            ctx=TableContext(title=title, subject=subject),
            summary="",
        )
        sentences = _instance_sentences(rng, instance)
        summary = " ".join(s for s, _ in sentences)
        assert split_sentences(summary) == [s for s, _ in sentences]
        records.append({
            "table": json.loads(table.to_json()),
            "title": title,
            "subject": subject,
            "sentences": [s for s, _ in sentences],
            "labels": [[t.as_list() for t in triples] for _, triples in sentences],
        })
    total = sum(len(r["sentences"]) for r in records)
    assert 190 <= total <= 220, total
    return records


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent
        / "src" / "tableinsights" / "data" / "gold_matching.jsonl")
    records = build()
    out.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    total = sum(len(r["sentences"]) for r in records)
    print(f"wrote {len(records)} instances, {total} sentences -> {out}")


if __name__ == "__main__":
    main()
