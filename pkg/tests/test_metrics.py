import json

import pytest

from tableinsights.analytics import AnalysisType
from tableinsights.errors import EmptyCorpus, MissingTriples
from tableinsights.metrics import (
    EvalRecord,
    bleu,
    chrf_pp,
    evaluate,
    load_records,
    modified_precisions,
    parent,
    ter,
)
from tableinsights.rdf import RdfTriple, TripleSet, linearize

IDENTICAL = [
    EvalRecord("Market cap peaked at 81.2 in 2022.", ("Market cap peaked at 81.2 in 2022.",)),
    EvalRecord("The minimum was 14.1 in 1960.", ("The minimum was 14.1 in 1960.",)),
]


def with_triples(prediction, reference):
    ts = TripleSet(
        (RdfTriple("2022", "MAX Market cap", "81.2"),), AnalysisType.MAX
    )
    return EvalRecord(prediction, (reference,), ts)


class TestBleu:
    def test_identity_is_100(self):
        assert bleu(IDENTICAL) == pytest.approx(100.0)

    def test_disjoint_is_0(self):
        records = [EvalRecord("alpha beta gamma delta", ("one two three four",))]
        assert bleu(records) == 0.0

    def test_classic_clipping_case(self):
        (unigram, *_rest) = modified_precisions(
            "the the the the the the the",
            ["the cat is on the mat", "there is a cat on the mat"],
        )
        correct, total = unigram
        assert (correct, total) == (2, 7)
        assert correct / total == pytest.approx(2 / 7, abs=1e-9)

    def test_brevity_penalty_applies(self):
        short = [EvalRecord("Market cap", ("Market cap peaked at 81.2 in 2022",))]
        full = [EvalRecord("Market cap peaked at 81.2 in 2022",
                           ("Market cap peaked at 81.2 in 2022",))]
        assert bleu(short) < bleu(full)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            bleu([])


class TestTer:
    def test_identity_is_0(self):
        assert ter(IDENTICAL) == 0.0

    def test_one_substitution_in_four_words(self):
        records = [EvalRecord("sales rose in june", ("sales fell in june",))]
        assert ter(records) == pytest.approx(0.25)

    def test_empty_prediction(self):
        records = [EvalRecord("", ("sales fell sharply",))]
        assert ter(records) == pytest.approx(1.0)

    def test_block_shift_cheaper_than_rewrites(self):
        records = [EvalRecord("in 2022 market cap peaked", ("market cap peaked in 2022",))]
        assert ter(records) <= 2 / 5

    def test_picks_best_reference(self):
        records = [EvalRecord("sales rose", ("completely different words", "sales rose"))]
        assert ter(records) == 0.0

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            ter([])


class TestChrf:
    def test_identity_is_100(self):
        assert chrf_pp(IDENTICAL) == pytest.approx(100.0)

    def test_disjoint_alphabets(self):
        records = [EvalRecord("aaaa bbbb", ("zzzz yyyy",))]
        assert chrf_pp(records) == 0.0

    def test_beta_one_symmetric(self):
        a = [EvalRecord("market cap peaked", ("cap peaked early",))]
        b = [EvalRecord("cap peaked early", ("market cap peaked",))]
        assert chrf_pp(a, beta=1.0) == pytest.approx(chrf_pp(b, beta=1.0))

    def test_partial_overlap_between_0_and_100(self):
        records = [EvalRecord("market cap peaked", ("market cap fell",))]
        assert 0.0 < chrf_pp(records) < 100.0


class TestParent:
    def test_identity_with_slots_is_1(self):
        text = "the maximum Market cap was 81.2 in 2022"
        assert parent([with_triples(text, text)]) == pytest.approx(1.0)

    def test_hallucinated_number_scores_lower(self):
        ref = "the maximum Market cap was 81.2 in 2022"
        clean = with_triples(ref, ref)
        dirty = with_triples(ref + " and also 999999", ref)
        assert parent([dirty]) < parent([clean])

    def test_table_credit_without_reference_wording(self):
        ref = "values rose steadily through the period"
        pred = "the maximum Market cap was 81.2 in 2022"
        assert parent([with_triples(pred, ref)]) > 0.0

    def test_missing_triples(self):
        with pytest.raises(MissingTriples):
            parent([EvalRecord("a", ("a",))])

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            parent([])


class TestParentMonotonicity:
    def test_more_hallucination_never_scores_higher(self):
        ref = "the maximum Market cap was 81.2 in 2022"
        scores = []
        for extra in range(5):
            junk = " ".join(str(7000 + i) for i in range(extra))
            pred = (ref + " " + junk).strip()
            scores.append(parent([with_triples(pred, ref)]))
        assert scores == sorted(scores, reverse=True)
        assert scores[0] > scores[-1]


class TestEvaluate:
    def test_all_metrics_on_identity(self):
        text = "the maximum Market cap was 81.2 in 2022"
        report = evaluate([with_triples(text, text)])
        assert report.bleu == pytest.approx(100.0)
        assert report.ter == 0.0
        assert report.chrf_pp == pytest.approx(100.0)
        assert report.parent == pytest.approx(1.0)
        assert report.n == 1

    def test_parent_omitted_without_triples(self):
        report = evaluate(IDENTICAL)
        assert report.parent is None

    def test_load_records(self, tmp_path):
        ts = TripleSet((RdfTriple("2022", "MAX Market cap", "81.2"),), AnalysisType.MAX)
        rows = [
            {"prediction": "p one", "references": ["r one"], "linearized": linearize(ts)},
            {"prediction": "p two", "references": ["r two", "r three"]},
        ]
        path = tmp_path / "records.jsonl"
        path.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
        records = load_records(path)
        assert len(records) == 2
        assert records[0].triples is not None
        assert records[1].triples is None
        assert records[1].references == ("r two", "r three")
