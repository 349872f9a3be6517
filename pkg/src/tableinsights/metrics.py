"""Corpus evaluation metrics: BLEU-4, TER, chrF++, and a simplified PARENT.

All four share one tokenizer (lowercase, punctuation as separators, decimal
numbers kept whole) so scores are comparable across metrics. BLEU, TER, and
chrF++ follow their standard definitions at desk-check scale; PARENT blends
reference overlap with support from the record's triples, which is what
makes it sensitive to hallucinated numbers the references happen to miss.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import EmptyCorpus, MissingTriples
from .faithfulness import slot_support
from .keywords import TypeDictionary
from .rdf import TripleSet, parse_linear
from .textnum import tokenize

BLEU_ORDER = 4
BLEU_EPSILON = 0.1
CHRF_CHAR_ORDER = 6
CHRF_WORD_ORDER = 2
CHRF_BETA = 2.0
TER_MAX_BLOCK = 5
PARENT_LAMBDA = 0.5
PARENT_SMOOTHING = 1e-5


@dataclass(frozen=True)
class EvalRecord:
    prediction: str
    references: tuple[str, ...]
    triples: TripleSet | None = None


@dataclass(frozen=True)
class EvalReport:
    bleu: float
    ter: float
    chrf_pp: float
    parent: float | None
    n: int


def load_records(path: str | Path) -> list[EvalRecord]:
    """Read JSONL rows {prediction, references[, linearized]}."""
    records: list[EvalRecord] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        triples = parse_linear(raw["linearized"]) if raw.get("linearized") else None
        records.append(EvalRecord(
            prediction=raw["prediction"],
            references=tuple(raw["references"]),
            triples=triples,
        ))
    return records


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def modified_precisions(
    prediction: str,
    references: Sequence[str],
    max_order: int = BLEU_ORDER,
) -> list[tuple[int, int]]:
    """Per-order (clipped matches, total n-grams) for one record."""
    pred = tokenize(prediction)
    refs = [tokenize(r) for r in references]
    out: list[tuple[int, int]] = []
    for n in range(1, max_order + 1):
        pred_counts = _ngrams(pred, n)
        max_ref: Counter = Counter()
        for ref in refs:
            for gram, count in _ngrams(ref, n).items():
                if count > max_ref[gram]:
                    max_ref[gram] = count
        correct = sum(min(count, max_ref[gram]) for gram, count in pred_counts.items())
        out.append((correct, sum(pred_counts.values())))
    return out


def _closest_ref_length(pred_len: int, refs: Sequence[Sequence[str]]) -> int:
    return min((abs(len(r) - pred_len), len(r)) for r in refs)[1]


def bleu(records: Sequence[EvalRecord]) -> float:
    """Corpus BLEU-4, 0..100. Higher-order zero counts get an epsilon floor;
    zero unigram overlap is a hard 0."""
    if not records:
        raise EmptyCorpus("no records to evaluate")
    correct = [0] * BLEU_ORDER
    total = [0] * BLEU_ORDER
    sys_len = 0
    ref_len = 0
    for rec in records:
        pred = tokenize(rec.prediction)
        refs = [tokenize(r) for r in rec.references]
        sys_len += len(pred)
        ref_len += _closest_ref_length(len(pred), refs)
        for n, (c, t) in enumerate(modified_precisions(rec.prediction, rec.references)):
            correct[n] += c
            total[n] += t
    if sys_len == 0 or total[0] == 0 or correct[0] == 0:
        return 0.0
    log_sum = 0.0
    orders = 0
    for n in range(BLEU_ORDER):
        if total[n] == 0:
            continue
        numerator = correct[n] if correct[n] > 0 else BLEU_EPSILON
        log_sum += math.log(numerator / total[n])
        orders += 1
    brevity = 1.0 if sys_len >= ref_len else math.exp(1.0 - ref_len / sys_len)
    return 100.0 * brevity * math.exp(log_sum / orders)


def _levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, token in enumerate(a, start=1):
        current = [i]
        for j, other in enumerate(b, start=1):
            cost = 0 if token == other else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def _ref_spans(ref: Sequence[str], max_len: int) -> set[tuple[str, ...]]:
    spans: set[tuple[str, ...]] = set()
    for n in range(1, max_len + 1):
        for i in range(len(ref) - n + 1):
            spans.add(tuple(ref[i:i + n]))
    return spans


def _ter_edits(pred: Sequence[str], ref: Sequence[str]) -> int:
    """Greedy block-shift TER edits: shifts cost one each, then word edits."""
    current = list(pred)
    distance = _levenshtein(current, ref)
    shifts = 0
    spans = _ref_spans(ref, TER_MAX_BLOCK)
    while distance > 0:
        best_distance = distance
        best: list[str] | None = None
        for i in range(len(current)):
            for length in range(1, min(TER_MAX_BLOCK, len(current) - i) + 1):
                block = current[i:i + length]
                if tuple(block) not in spans:
                    continue
                rest = current[:i] + current[i + length:]
                for j in range(len(rest) + 1):
                    if j == i:
                        continue
                    shifted = rest[:j] + block + rest[j:]
                    d = _levenshtein(shifted, ref)
                    if d < best_distance:
                        best_distance, best = d, shifted
        if best is None:
            break
        current, distance = best, best_distance
        shifts += 1
    return shifts + distance


def ter(records: Sequence[EvalRecord]) -> float:
    """Translation edit rate over the corpus; 0 is perfect, can exceed 1."""
    if not records:
        raise EmptyCorpus("no records to evaluate")
    edits = 0
    length = 0
    for rec in records:
        pred = tokenize(rec.prediction)
        best: tuple[float, int, int] | None = None
        for reference in rec.references:
            ref = tokenize(reference)
            e = _ter_edits(pred, ref)
            ratio = e / max(len(ref), 1)
            if best is None or ratio < best[0]:
                best = (ratio, e, len(ref))
        assert best is not None
        edits += best[1]
        length += best[2]
    return edits / max(length, 1)


def _fscore(precision: float, recall: float, beta: float) -> float:
    if precision + recall == 0:
        return 0.0
    b2 = beta * beta
    denominator = b2 * precision + recall
    if denominator == 0:
        return 0.0
    return (1 + b2) * precision * recall / denominator


def _overlap_stats(pred: Counter, ref: Counter) -> tuple[float, float] | None:
    pred_total = sum(pred.values())
    ref_total = sum(ref.values())
    if pred_total == 0 and ref_total == 0:
        return None
    matched = sum(min(count, ref[gram]) for gram, count in pred.items())
    precision = matched / pred_total if pred_total else 0.0
    recall = matched / ref_total if ref_total else 0.0
    return precision, recall


def _chrf_record(prediction: str, reference: str, beta: float) -> float:
    pred_chars = "".join(prediction.lower().split())
    ref_chars = "".join(reference.lower().split())
    pred_words = tokenize(prediction)
    ref_words = tokenize(reference)
    precisions: list[float] = []
    recalls: list[float] = []
    for n in range(1, CHRF_CHAR_ORDER + 1):
        stats = _overlap_stats(_ngrams(pred_chars, n), _ngrams(ref_chars, n))
        if stats is not None:
            precisions.append(stats[0])
            recalls.append(stats[1])
    for n in range(1, CHRF_WORD_ORDER + 1):
        stats = _overlap_stats(_ngrams(pred_words, n), _ngrams(ref_words, n))
        if stats is not None:
            precisions.append(stats[0])
            recalls.append(stats[1])
    if not precisions:
        return 0.0
    avg_p = sum(precisions) / len(precisions)
    avg_r = sum(recalls) / len(recalls)
    return _fscore(avg_p, avg_r, beta)


def chrf_pp(records: Sequence[EvalRecord], beta: float = CHRF_BETA) -> float:
    """chrF++ (char n<=6 plus word n<=2), record-averaged, 0..100."""
    if not records:
        raise EmptyCorpus("no records to evaluate")
    total = 0.0
    for rec in records:
        total += max(_chrf_record(rec.prediction, r, beta) for r in rec.references)
    return 100.0 * total / len(records)


def _geo_mean(values: Sequence[float]) -> float:
    if not values:
        return 0.0
    if any(v <= 0 for v in values):
        return 0.0
    return math.exp(sum(math.log(v) for v in values) / len(values))


def _parent_record(
    rec: EvalRecord,
    lam: float,
    type_words: TypeDictionary | None,
) -> float:
    assert rec.triples is not None
    pred = tokenize(rec.prediction)
    table_tokens = {
        token for t in rec.triples.triples for f in t.as_list() for token in tokenize(f)
    }
    supported, total_slots, _ = slot_support(rec.prediction, rec.triples, type_words)
    table_recall = supported / total_slots

    best = 0.0
    for reference in rec.references:
        ref = tokenize(reference)
        precisions: list[float] = []
        ref_recalls: list[float] = []
        for n in range(1, BLEU_ORDER + 1):
            pred_grams = _ngrams(pred, n)
            ref_grams = _ngrams(ref, n)
            pred_total = sum(pred_grams.values())
            if pred_total:
                credit = 0.0
                for gram, count in pred_grams.items():
                    overlap = min(count, ref_grams[gram])
                    entailed = sum(1 for tok in gram if tok in table_tokens) / n
                    credit += overlap + (count - overlap) * entailed
                precisions.append(max(credit, PARENT_SMOOTHING) / pred_total)
            ref_total = sum(ref_grams.values())
            if ref_total:
                matched = sum(min(count, pred_grams[gram]) for gram, count in ref_grams.items())
                ref_recalls.append(max(matched, PARENT_SMOOTHING) / ref_total)
        entailed_precision = _geo_mean(precisions)
        ref_recall = _geo_mean(ref_recalls)
        if table_recall <= 0:
            recall = 0.0
        else:
            recall = (ref_recall ** (1 - lam)) * (table_recall ** lam)
        f = _fscore(entailed_precision, recall, 1.0)
        if f > best:
            best = f
    return best


def parent(
    records: Sequence[EvalRecord],
    lam: float = PARENT_LAMBDA,
    type_words: TypeDictionary | None = None,
) -> float:
    """Entailed precision/recall F-blend in [0, 1]; needs triples per record."""
    if not records:
        raise EmptyCorpus("no records to evaluate")
    total = 0.0
    for rec in records:
        if rec.triples is None:
            raise MissingTriples("PARENT needs a triple set on every record")
        total += _parent_record(rec, lam, type_words)
    return total / len(records)


def evaluate(records: Sequence[EvalRecord]) -> EvalReport:
    """All four metrics; PARENT only when every record carries triples."""
    if not records:
        raise EmptyCorpus("no records to evaluate")
    with_triples = all(rec.triples is not None for rec in records)
    return EvalReport(
        bleu=bleu(records),
        ter=ter(records),
        chrf_pp=chrf_pp(records),
        parent=parent(records) if with_triples else None,
        n=len(records),
    )
