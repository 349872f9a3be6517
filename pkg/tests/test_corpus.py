import json
import random
from pathlib import Path

import pytest

from tableinsights.analytics import AnalysisType
from tableinsights.errors import (
    InsufficientContextPairs,
    LengthMismatch,
    TooFewPairs,
    ValidationError,
)
from tableinsights.corpus import (
    AugmentationPrompt,
    MatchedPair,
    WebpageInstance,
    build_augmentation_prompts,
    build_pairs,
    candidate_triple_sets,
    harvest_weak_labels,
    low_prior_types,
    match,
    pair_from_record,
    pair_record,
    parse_prompt,
    render_prompt,
    split_dataset,
    split_sentences,
    type_distribution,
)
from tableinsights.rdf import RdfTriple, TripleSet, linearize, parse_linear
from tableinsights.table import TableContext, parse_csv

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "tableinsights" / "data"


def cheese_instance(cheese_csv, summary, title="Worldwide cheese market cap"):
    return WebpageInstance(
        table=parse_csv(cheese_csv),
        ctx=TableContext(title=title, subject="food"),
        summary=summary,
    )


class TestSplitSentences:
    def test_two_sentences(self):
        assert split_sentences("A grew. B fell.") == ["A grew.", "B fell."]

    def test_abbreviation_guard(self):
        assert split_sentences("In the U.S. sales rose.") == ["In the U.S. sales rose."]

    def test_approx_guard(self):
        got = split_sentences("Revenue was approx. 40 units. It grew later.")
        assert got == ["Revenue was approx. 40 units.", "It grew later."]

    def test_empty(self):
        assert split_sentences("") == []

    def test_question_and_bang(self):
        got = split_sentences("Did sales rise? They did! Clearly.")
        assert got == ["Did sales rise?", "They did!", "Clearly."]

    def test_decimal_points_not_boundaries(self):
        got = split_sentences("Cap hit 81.2 in 2022. Profit doubled.")
        assert got == ["Cap hit 81.2 in 2022.", "Profit doubled."]

    def test_whitespace_collapsed(self):
        got = split_sentences("Sales  rose\nsharply. Then fell.")
        assert got == ["Sales rose sharply.", "Then fell."]


class TestMatch:
    @pytest.fixture()
    def table(self, cheese_csv):
        return parse_csv(cheese_csv)

    def test_average_sentence(self, table):
        triple = RdfTriple("1960-2022", "AVERAGE Market cap", "57.13")
        s = "The average worldwide cheese market cap across the years 1960-2022 is 57.13"
        assert match(s, triple, table)

    def test_max_with_dictionary_word(self, table):
        triple = RdfTriple("2022", "MAX Market cap", "81.2")
        assert match("Market cap peaked at 81.2 in 2022", triple, table)

    def test_no_keyword_no_number(self, table):
        triple = RdfTriple("2022", "MAX Market cap", "81.2")
        assert not match("Cheese is popular.", triple, table)

    def test_rounded_value_accepted(self, table):
        triple = RdfTriple("2022", "MAX Market cap", "81.2")
        assert match("Market cap peaked at roughly 81 in 2022", triple, table)

    def test_keyword_without_value_fails(self, table):
        triple = RdfTriple("2022", "MAX Market cap", "81.2")
        assert not match("Market cap peaked early", triple, table)

    def test_value_without_column_or_row_fails(self, table):
        triple = RdfTriple("2022", "MAX Market cap", "81.2")
        assert not match("The peak level was 81.2", triple, table)

    def test_row_name_suffices(self, table):
        triple = RdfTriple("2022", "MAX Market cap", "81.2")
        assert match("The 2022 figure peaked at 81.2", triple, table)

    def test_trend_needs_direction(self, table):
        triple = RdfTriple("1960-2022", "TREND Market cap", "UP")
        assert match("Market cap showed a growing trend", triple, table)
        assert not match("Market cap showed a declining trend", triple, table)

    def test_correlated_needs_both_columns(self):
        t = parse_csv("Year,Price,Profit\n2020,1,2\n2021,2,4\n2022,3,6")
        triple = RdfTriple("Profit", "CORRELATED", "Price")
        assert match("Profit and Price moved in tandem", triple, t)
        assert not match("Profit moved in tandem with demand", triple, t)

    def test_compare_needs_both_categories(self, table):
        triple = RdfTriple("2021", "COMPARE Market cap", "2022")
        assert match("In 2022 Market cap exceeded its 2021 level", triple, table)
        assert not match("Market cap exceeded its 2021 level", triple, table)

    def test_title_triple_never_matches(self, table):
        triple = RdfTriple("CONTEXT", "TITLE", "Worldwide cheese market cap")
        assert not match("Worldwide cheese market cap", triple, table)

    def test_inflection_tolerance(self):
        t = parse_csv("Year,Export,Import\n2020,1,9\n2021,2,8\n2022,3,7")
        triple = RdfTriple("2022", "MAX Export", "3")
        assert match("Exports peaked at 3 in 2022", triple, t)


class TestBuildPairs:
    def test_average_sentence_yields_one_pair(self, cheese_csv):
        inst = cheese_instance(
            cheese_csv,
            "The average worldwide cheese Market cap across 1960-2022 is 57.13.",
        )
        (pair,) = build_pairs(inst)
        predicates = [t.predicate for t in pair.triples.triples]
        assert "AVERAGE Market cap" in predicates
        assert predicates[-1] == "TITLE"
        assert pair.insight_types == frozenset({AnalysisType.AVERAGE})

    def test_no_numbers_no_pairs(self, cheese_csv):
        inst = cheese_instance(cheese_csv, "Cheese is loved worldwide.")
        assert build_pairs(inst) == []

    def test_multi_type_sentence_aggregates(self, cheese_csv):
        inst = cheese_instance(
            cheese_csv,
            "Market cap peaked at its highest value of 81.2 recorded in 2022.",
        )
        (pair,) = build_pairs(inst)
        assert AnalysisType.MAX in pair.insight_types
        assert len(pair.insight_types) >= 2

    def test_sentence_order_preserved(self, cheese_csv):
        inst = cheese_instance(
            cheese_csv,
            "Market cap peaked at 81.2 in 2022. "
            "The minimum Market cap was 14.1 back in 1960.",
        )
        pairs = build_pairs(inst)
        assert [p.insight_types for p in pairs] == [
            frozenset({AnalysisType.MAX}), frozenset({AnalysisType.MIN}),
        ]


class TestSplitDataset:
    def make_pairs(self, n):
        triples = (RdfTriple("2022", "Market cap", "81.2"),)
        return [
            MatchedPair(f"sentence {i}", TripleSet(triples, AnalysisType.VALUE),
                        frozenset({AnalysisType.VALUE}))
            for i in range(n)
        ]

    def test_59_exact(self):
        train, test, val = split_dataset(self.make_pairs(59), seed=0)
        assert (len(train), len(test), len(val)) == (53, 3, 3)

    def test_deterministic(self):
        pairs = self.make_pairs(200)
        a = split_dataset(pairs, seed=5)
        b = split_dataset(pairs, seed=5)
        assert a == b

    def test_disjoint_union(self):
        pairs = self.make_pairs(500)
        train, test, val = split_dataset(pairs, seed=1)
        rebuilt = sorted(p.sentence for p in train + test + val)
        assert rebuilt == sorted(p.sentence for p in pairs)
        assert len(train) + len(test) + len(val) == 500

    def test_too_few(self):
        with pytest.raises(TooFewPairs):
            split_dataset(self.make_pairs(2), seed=0)


class TestDistribution:
    def test_empty_all_zero(self):
        counts = type_distribution([])
        assert set(counts) == set(AnalysisType)
        assert all(v == 0 for v in counts.values())

    def test_multi_type_pairs_increment_each(self):
        triples = (RdfTriple("2022", "MAX Market cap", "81.2"),)
        pair = MatchedPair("s", TripleSet(triples, AnalysisType.MAX),
                           frozenset({AnalysisType.MAX, AnalysisType.VALUE}))
        counts = type_distribution([pair])
        assert counts[AnalysisType.MAX] == counts[AnalysisType.VALUE] == 1

    def test_low_prior_threshold(self):
        counts = {k: 200 for k in AnalysisType}
        counts[AnalysisType.SUM] = 2
        counts[AnalysisType.AVERAGE] = 39
        assert low_prior_types(counts) == [AnalysisType.SUM, AnalysisType.AVERAGE]


def make_labeled(kind, n, predicate):
    out = []
    for i in range(n):
        triples = (RdfTriple(f"19{60 + i}", predicate, f"{i + 1}"),)
        out.append(MatchedPair(
            f"The {kind.value.lower()} value was {i + 1}.",
            TripleSet(triples, kind),
            frozenset({kind}),
        ))
    return out


def make_targets(kind, n, predicate):
    return [
        TripleSet((RdfTriple(f"20{10 + i}", predicate, f"{90 + i}"),), kind)
        for i in range(n)
    ]


class TestAugmentationPrompts:
    def test_ten_labeled_three_targets(self):
        labeled = make_labeled(AnalysisType.SUM, 10, "SUM Revenue")
        targets = make_targets(AnalysisType.SUM, 3, "SUM Revenue")
        prompts = build_augmentation_prompts(labeled, targets)
        assert len(prompts) == 3
        for p in prompts:
            assert len(p.context_pairs) == 5
            assert p.target_type is AnalysisType.SUM
            assert p.target not in {lin for lin, _ in p.context_pairs}

    def test_insufficient_context(self):
        labeled = make_labeled(AnalysisType.SUM, 2, "SUM Revenue")
        targets = make_targets(AnalysisType.SUM, 1, "SUM Revenue")
        with pytest.raises(InsufficientContextPairs):
            build_augmentation_prompts(labeled, targets)

    def test_per_type_cap(self):
        labeled = make_labeled(AnalysisType.SUM, 10, "SUM Revenue")
        targets = make_targets(AnalysisType.SUM, 30, "SUM Revenue")
        prompts = build_augmentation_prompts(labeled, targets, per_type_cap=12)
        assert len(prompts) == 12

    def test_rich_types_get_no_prompts(self):
        labeled = make_labeled(AnalysisType.MAX, 150, "MAX Revenue")
        targets = make_targets(AnalysisType.MAX, 5, "MAX Revenue")
        assert build_augmentation_prompts(labeled, targets) == []

    def test_deterministic_under_seed(self):
        labeled = make_labeled(AnalysisType.SUM, 10, "SUM Revenue")
        targets = make_targets(AnalysisType.SUM, 4, "SUM Revenue")
        a = build_augmentation_prompts(labeled, targets, seed=3)
        b = build_augmentation_prompts(labeled, targets, seed=3)
        assert a == b

    def test_render_ends_with_cue(self):
        labeled = make_labeled(AnalysisType.SUM, 10, "SUM Revenue")
        targets = make_targets(AnalysisType.SUM, 1, "SUM Revenue")
        (prompt,) = build_augmentation_prompts(labeled, targets)
        text = render_prompt(prompt)
        assert text.endswith("Insight:")
        assert text.count("RDF: ") == 6

    def test_render_parse_inverse(self):
        labeled = make_labeled(AnalysisType.SUM, 10, "SUM Revenue")
        targets = make_targets(AnalysisType.SUM, 2, "SUM Revenue")
        for prompt in build_augmentation_prompts(labeled, targets):
            assert parse_prompt(render_prompt(prompt)) == prompt

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValidationError):
            parse_prompt("not a prompt")


class TestHarvest:
    def prompt(self):
        labeled = make_labeled(AnalysisType.SUM, 10, "SUM Revenue")
        targets = make_targets(AnalysisType.SUM, 1, "SUM Revenue")
        return build_augmentation_prompts(labeled, targets)[0]

    def test_truncates_at_blank_line(self):
        p = self.prompt()
        (pair,) = harvest_weak_labels([p], ["The average X is 5.\n\nRDF: junk"])
        assert pair.sentence == "The average X is 5."
        assert pair.insight_types == frozenset({AnalysisType.SUM})
        assert linearize(pair.triples) == p.target

    def test_empty_response_dropped(self):
        assert harvest_weak_labels([self.prompt()], ["   \n\nmore"]) == []

    def test_length_mismatch(self):
        p = self.prompt()
        with pytest.raises(LengthMismatch):
            harvest_weak_labels([p, p], ["only one"])


class TestPairRecords:
    def test_round_trip(self, cheese_csv):
        inst = cheese_instance(
            cheese_csv, "Market cap peaked at 81.2 in 2022.")
        (pair,) = build_pairs(inst)
        record = pair_record(pair, time_series=True, multi_column=False, subject="food")
        back = pair_from_record(json.loads(json.dumps(record)))
        assert back.sentence == pair.sentence
        assert back.triples.triples == pair.triples.triples
        assert back.insight_types == pair.insight_types
        assert record["time_series"] is True and record["subject"] == "food"

    def test_types_sorted_in_record(self, cheese_csv):
        inst = cheese_instance(
            cheese_csv,
            "Market cap peaked at its highest value of 81.2 recorded in 2022.",
        )
        (pair,) = build_pairs(inst)
        record = pair_record(pair)
        assert record["types"] == sorted(record["types"])


class TestGoldCorpus:
    """The bundled mini-corpus must be decidable by the documented rules."""

    def load(self):
        path = DATA_DIR / "gold_matching.jsonl"
        return [json.loads(line) for line in path.read_text().splitlines()]

    def test_shape(self):
        records = self.load()
        n_sentences = sum(len(r["sentences"]) for r in records)
        assert len(records) == 20
        assert 190 <= n_sentences <= 220

    def test_precision_recall(self):
        from tableinsights.table import DataTable

        tp = fp = fn = 0
        for record in self.load():
            table = DataTable.from_json(json.dumps(record["table"]))
            inst = WebpageInstance(
                table=table,
                ctx=TableContext(title=record["title"], subject=record["subject"]),
                summary=" ".join(record["sentences"]),
            )
            sets = candidate_triple_sets(inst)
            triples: list[RdfTriple] = []
            for ts in sets:
                for t in ts.triples:
                    if t.predicate != "TITLE" and t not in triples:
                        triples.append(t)
            for sentence, labels in zip(record["sentences"], record["labels"]):
                expected = {tuple(t) for t in labels}
                got = {
                    (t.subject, t.predicate, t.object)
                    for t in triples
                    if match(sentence, t, table)
                }
                tp += len(got & expected)
                fp += len(got - expected)
                fn += len(expected - got)
        precision = tp / (tp + fp)
        recall = tp / (tp + fn)
        assert precision >= 0.95
        assert recall >= 0.95
