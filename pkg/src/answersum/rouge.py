"""ROUGE-1/2/L against multiple references, plus benchmark aggregation.

Per reference, ROUGE-N counts clipped n-gram matches (for each distinct
n-gram, the smaller of its candidate and reference multiplicities) and
ROUGE-L measures the longest common subsequence over whole token
sequences.  A candidate's score against a reference set is the arithmetic
mean of its per-reference scores, and a benchmark aggregate is the
arithmetic mean over queries.  Recall, precision, and F1 are all computed;
F1 is the headline number in rendered tables.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import BenchmarkEntry
from .pipeline import SummaryResult
from .textutil import rouge_tokenize


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float

    def as_dict(self) -> dict:
        return {"recall": self.recall, "precision": self.precision, "f1": self.f1}


def _f1(recall: float, precision: float) -> float:
    if recall + precision == 0:
        return 0.0
    return 2 * recall * precision / (recall + precision)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(
        tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )


def rouge_n(
    candidate: list[str], references: list[list[str]], n: int
) -> RougeScore:
    """Mean clipped n-gram overlap of ``candidate`` against each reference."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not references:
        raise ValueError("need at least one reference")
    candidate_grams = _ngrams(candidate, n)
    candidate_total = sum(candidate_grams.values())

    recalls, precisions, f1s = [], [], []
    for reference in references:
        reference_grams = _ngrams(reference, n)
        reference_total = sum(reference_grams.values())
        matched = sum(
            min(count, candidate_grams[gram])
            for gram, count in reference_grams.items()
        )
        recall = matched / reference_total if reference_total else 0.0
        precision = matched / candidate_total if candidate_total else 0.0
        recalls.append(recall)
        precisions.append(precision)
        f1s.append(_f1(recall, precision))
    count = len(references)
    return RougeScore(
        recall=sum(recalls) / count,
        precision=sum(precisions) / count,
        f1=sum(f1s) / count,
    )


def _lcs_length(a: list[str], b: list[str]) -> int:
    """Longest common subsequence via a two-row dynamic program."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b, 1):
            if token == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: list[str], references: list[list[str]]) -> RougeScore:
    """Mean LCS overlap of ``candidate`` against each reference."""
    if not references:
        raise ValueError("need at least one reference")
    recalls, precisions, f1s = [], [], []
    for reference in references:
        length = _lcs_length(candidate, reference)
        recall = length / len(reference) if reference else 0.0
        precision = length / len(candidate) if candidate else 0.0
        recalls.append(recall)
        precisions.append(precision)
        f1s.append(_f1(recall, precision))
    count = len(references)
    return RougeScore(
        recall=sum(recalls) / count,
        precision=sum(precisions) / count,
        f1=sum(f1s) / count,
    )


@dataclass(frozen=True)
class QueryScores:
    rouge1: RougeScore
    rouge2: RougeScore
    rougeL: RougeScore

    def as_dict(self) -> dict:
        return {
            "rouge1": self.rouge1.as_dict(),
            "rouge2": self.rouge2.as_dict(),
            "rougeL": self.rougeL.as_dict(),
        }


@dataclass(frozen=True)
class RougeReport:
    per_query: dict[str, QueryScores]
    aggregate: QueryScores
    config_echo: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config_echo,
            "aggregate": self.aggregate.as_dict(),
            "per_query": {k: v.as_dict() for k, v in self.per_query.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"

    def to_table(self, system: str = "pipeline") -> str:
        """Aligned plain-text table: one row per statistic."""
        rows = [
            ("System", "Metric", "ROUGE-1", "ROUGE-2", "ROUGE-L"),
            (system, "F1",
             f"{self.aggregate.rouge1.f1:.4f}",
             f"{self.aggregate.rouge2.f1:.4f}",
             f"{self.aggregate.rougeL.f1:.4f}"),
            (system, "Recall",
             f"{self.aggregate.rouge1.recall:.4f}",
             f"{self.aggregate.rouge2.recall:.4f}",
             f"{self.aggregate.rougeL.recall:.4f}"),
            (system, "Precision",
             f"{self.aggregate.rouge1.precision:.4f}",
             f"{self.aggregate.rouge2.precision:.4f}",
             f"{self.aggregate.rougeL.precision:.4f}"),
        ]
        widths = [max(len(row[col]) for row in rows) for col in range(5)]
        lines = []
        for i, row in enumerate(rows):
            lines.append("  ".join(cell.ljust(widths[col])
                                   for col, cell in enumerate(row)).rstrip())
            if i == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines)


def score_summary(
    summary_text: str, references: list[list[str]]
) -> QueryScores:
    """Score one summary against its reference summaries."""
    candidate = rouge_tokenize(summary_text)
    reference_tokens = [rouge_tokenize(" ".join(ref)) for ref in references]
    return QueryScores(
        rouge1=rouge_n(candidate, reference_tokens, 1),
        rouge2=rouge_n(candidate, reference_tokens, 2),
        rougeL=rouge_l(candidate, reference_tokens),
    )


def _mean_scores(values: list[RougeScore]) -> RougeScore:
    count = len(values)
    return RougeScore(
        recall=sum(v.recall for v in values) / count,
        precision=sum(v.precision for v in values) / count,
        f1=sum(v.f1 for v in values) / count,
    )


def evaluate_benchmark(
    results: list[SummaryResult], entries: list[BenchmarkEntry]
) -> RougeReport:
    """Score aligned (result, entry) pairs and average over queries."""
    if len(results) != len(entries):
        raise ValueError(
            f"{len(results)} results for {len(entries)} entries (misaligned)"
        )
    if not entries:
        raise ValueError("nothing to evaluate")

    per_query = {}
    for index, (result, entry) in enumerate(zip(results, entries)):
        summary_text = " ".join(s.text for s in result.sentences)
        per_query[f"q{index:03d}"] = score_summary(
            summary_text, [list(ref) for ref in entry.references]
        )

    scores = list(per_query.values())
    aggregate = QueryScores(
        rouge1=_mean_scores([s.rouge1 for s in scores]),
        rouge2=_mean_scores([s.rouge2 for s in scores]),
        rougeL=_mean_scores([s.rougeL for s in scores]),
    )
    config_echo = results[0].config if results else {}
    return RougeReport(per_query=per_query, aggregate=aggregate,
                       config_echo=config_echo)


def save_report(report: RougeReport, path: str | Path) -> None:
    Path(path).write_text(report.to_json(), encoding="utf-8")
