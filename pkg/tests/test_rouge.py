"""Tests for ROUGE-1/2/L and benchmark aggregation."""

import random
from functools import lru_cache

import pytest

from answersum.corpus import (
    AnswerSentence,
    BenchmarkEntry,
    TechnicalQuery,
    sentence_id,
)
from answersum.pipeline import SummaryResult
from answersum.rouge import (
    RougeScore,
    evaluate_benchmark,
    rouge_l,
    rouge_n,
    score_summary,
)


def oracle_rouge_n(candidate, reference, n):
    """Exhaustive clipped n-gram counting via list enumeration."""
    cand_grams = [tuple(candidate[i : i + n]) for i in range(len(candidate) - n + 1)]
    ref_grams = [tuple(reference[i : i + n]) for i in range(len(reference) - n + 1)]
    matched = sum(
        min(cand_grams.count(g), ref_grams.count(g)) for g in set(ref_grams)
    )
    recall = matched / len(ref_grams) if ref_grams else 0.0
    precision = matched / len(cand_grams) if cand_grams else 0.0
    f1 = (
        2 * recall * precision / (recall + precision)
        if recall + precision
        else 0.0
    )
    return recall, precision, f1


def oracle_lcs(a, b):
    """Memoized recursive LCS, independent of the iterative two-row DP."""

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


class TestRougeN:
    def test_identity(self):
        tokens = "the quick brown fox".split()
        score = rouge_n(tokens, [tokens], 1)
        assert (score.recall, score.precision, score.f1) == (1.0, 1.0, 1.0)

    def test_hand_enumerated_example(self):
        candidate = "the cat sat".split()
        reference = "the cat sat on the mat".split()
        r1 = rouge_n(candidate, [reference], 1)
        assert r1.recall == pytest.approx(3 / 6)
        assert r1.precision == pytest.approx(3 / 3)
        r2 = rouge_n(candidate, [reference], 2)
        assert r2.recall == pytest.approx(2 / 5)

    def test_empty_candidate(self):
        score = rouge_n([], ["a b c".split()], 1)
        assert (score.recall, score.precision, score.f1) == (0.0, 0.0, 0.0)

    def test_n_larger_than_texts(self):
        score = rouge_n(["a"], [["b"]], 3)
        assert (score.recall, score.precision, score.f1) == (0.0, 0.0, 0.0)

    def test_mean_over_references(self):
        candidate = "a b".split()
        refs = ["a b".split(), "c d".split()]
        score = rouge_n(candidate, refs, 1)
        assert score.recall == pytest.approx((1.0 + 0.0) / 2)
        assert score.f1 == pytest.approx((1.0 + 0.0) / 2)

    def test_requires_reference(self):
        with pytest.raises(ValueError):
            rouge_n(["a"], [], 1)

    def test_matches_oracle_on_random_pairs(self):
        rng = random.Random(42)
        alphabet = [f"w{i}" for i in range(10)]
        for _ in range(300):
            candidate = rng.choices(alphabet, k=rng.randint(0, 20))
            reference = rng.choices(alphabet, k=rng.randint(1, 20))
            for n in (1, 2):
                expected = oracle_rouge_n(candidate, reference, n)
                got = rouge_n(candidate, [reference], n)
                assert got.recall == pytest.approx(expected[0], abs=1e-12)
                assert got.precision == pytest.approx(expected[1], abs=1e-12)
                assert got.f1 == pytest.approx(expected[2], abs=1e-12)

    def test_self_reference_recall_one(self):
        rng = random.Random(3)
        alphabet = ["x", "y", "z"]
        for _ in range(50):
            tokens = rng.choices(alphabet, k=rng.randint(1, 15))
            assert rouge_n(tokens, [tokens], 1).recall == 1.0


class TestRougeL:
    def test_identity(self):
        tokens = "one two three".split()
        score = rouge_l(tokens, [tokens])
        assert (score.recall, score.precision, score.f1) == (1.0, 1.0, 1.0)

    def test_hand_lcs_example(self):
        score = rouge_l("a b d".split(), ["a b c d".split()])
        assert score.recall == pytest.approx(3 / 4)
        assert score.precision == pytest.approx(1.0)
        assert score.f1 == pytest.approx(2 * 0.75 / 1.75)

    def test_disjoint(self):
        score = rouge_l("a b".split(), ["c d".split()])
        assert (score.recall, score.precision, score.f1) == (0.0, 0.0, 0.0)

    def test_matches_oracle_on_random_pairs(self):
        rng = random.Random(11)
        alphabet = [f"t{i}" for i in range(6)]
        for _ in range(200):
            candidate = rng.choices(alphabet, k=rng.randint(0, 18))
            reference = rng.choices(alphabet, k=rng.randint(1, 18))
            length = oracle_lcs(tuple(candidate), tuple(reference))
            got = rouge_l(candidate, [reference])
            assert got.recall == pytest.approx(
                length / len(reference), abs=1e-12
            )
            if candidate:
                assert got.precision == pytest.approx(
                    length / len(candidate), abs=1e-12
                )
            assert length <= min(len(candidate), len(reference)) or not candidate
            assert got.f1 <= 1.0


def _entry(query_text, candidate_texts, references):
    query = TechnicalQuery(text=query_text)
    candidates = tuple(
        AnswerSentence(id=sentence_id(0, i), text=t, answer_index=0,
                       sentence_index=i)
        for i, t in enumerate(candidate_texts, 1)
    )
    return BenchmarkEntry(query=query, candidates=candidates,
                          references=tuple(tuple(r) for r in references))


def _result(entry, sentence_texts):
    sentences = tuple(
        AnswerSentence(id=sentence_id(1, i), text=t, answer_index=1,
                       sentence_index=i)
        for i, t in enumerate(sentence_texts, 1)
    )
    return SummaryResult(query=entry.query, sentences=sentences,
                         stage_trace=(), config={})


class TestEvaluateBenchmark:
    def test_perfect_match_gives_ones(self):
        ref = ["alpha beta", "gamma delta", "epsilon", "zeta", "eta"]
        entry = _entry("q one", ["alpha beta"], [ref, ref, ref])
        result = _result(entry, ref)
        report = evaluate_benchmark([result], [entry])
        assert report.aggregate.rouge1.f1 == pytest.approx(1.0)
        assert report.aggregate.rouge2.f1 == pytest.approx(1.0)
        assert report.aggregate.rougeL.f1 == pytest.approx(1.0)

    def test_aggregate_is_mean_of_per_query(self):
        ref_a = ["a b c d e", "f", "g", "h", "i"]
        ref_b = ["p q r s t", "u", "v", "w", "x"]
        entries = [
            _entry("query one", ["a b"], [ref_a]),
            _entry("query two", ["p q"], [ref_b]),
        ]
        results = [
            _result(entries[0], ["a b c d e f g h i"]),
            _result(entries[1], ["p q"]),
        ]
        report = evaluate_benchmark(results, entries)
        per_query = list(report.per_query.values())
        for metric in ("rouge1", "rouge2", "rougeL"):
            for stat in ("recall", "precision", "f1"):
                values = [getattr(getattr(q, metric), stat) for q in per_query]
                assert getattr(getattr(report.aggregate, metric), stat) == (
                    pytest.approx(sum(values) / len(values))
                )

    def test_misalignment_rejected(self):
        ref = ["a", "b", "c", "d", "e"]
        entry = _entry("q", ["a"], [ref])
        with pytest.raises(ValueError):
            evaluate_benchmark([], [entry])

    def test_sentence_boundaries_do_not_matter(self):
        refs = [["alpha beta gamma", "delta", "eps", "zeta", "eta"]]
        one = score_summary("alpha beta gamma delta", [list(r) for r in refs])
        # same tokens, different sentence packing on the candidate side
        two = score_summary("alpha beta  gamma delta", [list(r) for r in refs])
        assert one == two

    def test_table_has_three_metric_rows(self):
        ref = ["a b", "c", "d", "e", "f"]
        entry = _entry("q", ["a"], [ref])
        report = evaluate_benchmark([_result(entry, ["a b"])], [entry])
        table = report.to_table(system="test")
        lines = table.splitlines()
        assert "ROUGE-1" in lines[0] and "ROUGE-2" in lines[0]
        assert len(lines) == 5  # header + rule + F1/Recall/Precision rows
        assert lines[2].startswith("test")


class TestRougeScoreInvariants:
    def test_f1_zero_when_both_zero(self):
        score = RougeScore(recall=0.0, precision=0.0, f1=0.0)
        assert score.f1 == 0.0

    def test_random_scores_stay_in_unit_interval(self):
        rng = random.Random(9)
        alphabet = ["a", "b", "c", "d"]
        for _ in range(100):
            candidate = rng.choices(alphabet, k=rng.randint(0, 12))
            refs = [
                rng.choices(alphabet, k=rng.randint(1, 12))
                for _ in range(rng.randint(1, 3))
            ]
            for score in (rouge_n(candidate, refs, 1),
                          rouge_n(candidate, refs, 2),
                          rouge_l(candidate, refs)):
                assert 0.0 <= score.recall <= 1.0
                assert 0.0 <= score.precision <= 1.0
                assert 0.0 <= score.f1 <= 1.0
