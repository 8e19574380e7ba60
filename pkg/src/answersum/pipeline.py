"""End-to-end orchestration: usefulness -> centrality -> redundancy removal.

A summary run scores every candidate sentence against the query, keeps the
``top_k`` most useful, re-ranks those by graph centrality, and finally
greedy-selects a low-redundancy subset under the sentence budget.  Ablation
modes cut the pipeline after stage 1 or stage 2 and take the top ``budget``
of that stage's ranking instead, so per-module contributions can be
measured with the same machinery.

Every run records a per-sentence stage trace (scores, keep/drop decisions,
and drop reasons) sufficient to replay the selection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .centrality import ScoredSentence, TextRankConfig, textrank, build_graph
from .corpus import AnnotationUnit, AnswerSentence, BenchmarkEntry, TechnicalQuery
from .redundancy import RedundancyConfig
from .scoring import SentenceEmbedder, UsefulnessScorer, cosine_similarity

Stages = Literal["stage1", "stage12", "full"]

STAGE_CHOICES = ("stage1", "stage12", "full")

DEFAULT_TOP_K = 30

EmbedderFactory = Callable[[list[str]], SentenceEmbedder]


class StageError(Exception):
    """A scorer or embedder failed; ``stage`` names the pipeline stage."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage} stage failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    usefulness_scorer: UsefulnessScorer
    embedder: SentenceEmbedder | EmbedderFactory
    top_k: int = DEFAULT_TOP_K
    textrank: TextRankConfig = field(default_factory=TextRankConfig)
    redundancy: RedundancyConfig = field(default_factory=RedundancyConfig)
    stages: Stages = "full"
    scorer_label: str = ""

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.top_k < self.redundancy.budget:
            raise ValueError("top_k must be >= the redundancy budget")
        if self.stages not in STAGE_CHOICES:
            raise ValueError(f"stages must be one of {STAGE_CHOICES}")
        if not self.scorer_label:
            self.scorer_label = type(self.usefulness_scorer).__name__

    def summary(self) -> dict:
        """Flat description of the configuration, echoed into reports."""
        return {
            "scorer": self.scorer_label,
            "top_k": self.top_k,
            "damping": self.textrank.damping,
            "convergence_threshold": self.textrank.convergence_threshold,
            "max_iterations": self.textrank.max_iterations,
            "redundancy_threshold": self.redundancy.threshold,
            "budget": self.redundancy.budget,
            "stages": self.stages,
        }


@dataclass(frozen=True)
class SummaryResult:
    query: TechnicalQuery
    sentences: tuple[AnswerSentence, ...]
    stage_trace: tuple[dict, ...]
    config: dict
    centrality_converged: bool = True

    def to_dict(self) -> dict:
        return {
            "query": {"text": self.query.text, "tags": sorted(self.query.tags)},
            "config": self.config,
            "centrality_converged": self.centrality_converged,
            "sentences": [{"id": s.id, "text": s.text} for s in self.sentences],
            "stage_trace": list(self.stage_trace),
        }

    def to_json(self) -> str:
        """Canonical JSON; byte-identical across runs for identical inputs."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class BenchmarkItemResult:
    """One benchmark entry's outcome; failures never abort the batch."""

    entry_index: int
    result: SummaryResult | None = None
    error: str | None = None


def _resolve_embedder(
    embedder: SentenceEmbedder | EmbedderFactory, corpus: list[str]
) -> SentenceEmbedder:
    # a class (e.g. TfidfEmbedder itself) or plain callable is a factory to
    # fit on this candidate list; an instance with .embed is used as-is
    if isinstance(embedder, type) or not hasattr(embedder, "embed"):
        return embedder(corpus)
    return embedder


def summarize_sentences(
    query: TechnicalQuery,
    sentences: list[AnswerSentence],
    config: PipelineConfig,
) -> SummaryResult:
    """Run the staged pipeline over an explicit candidate list."""
    if not sentences:
        raise ValueError("need at least one candidate sentence")

    trace: dict[str, dict] = {
        s.id: {
            "id": s.id,
            "text": s.text,
            "usefulness": None,
            "kept_stage1": False,
            "centrality": None,
            "selected": False,
            "drop_reason": None,
            "redundant_with": None,
            "similarity": None,
        }
        for s in sentences
    }

    # Stage 1: usefulness ranking, keep the top_k (ties by ascending id).
    try:
        scores = config.usefulness_scorer.score(
            query.text, [s.text for s in sentences]
        )
    except Exception as exc:
        raise StageError("usefulness", exc) from exc
    if len(scores) != len(sentences):
        raise StageError(
            "usefulness",
            ValueError(f"scorer returned {len(scores)} scores for "
                       f"{len(sentences)} sentences"),
        )
    stage1 = sorted(
        (ScoredSentence(sentence=s, score=float(v))
         for s, v in zip(sentences, scores)),
        key=lambda item: (-item.score, item.sentence.id),
    )
    for item in stage1:
        trace[item.sentence.id]["usefulness"] = item.score
    kept = stage1[: config.top_k]
    for item in stage1[config.top_k :]:
        trace[item.sentence.id]["drop_reason"] = "below_top_k"
    for item in kept:
        trace[item.sentence.id]["kept_stage1"] = True

    converged = True
    if config.stages == "stage1":
        ranking = kept
    else:
        # Stage 2: centrality re-ranking of the useful sentences.
        result = textrank(build_graph([item.sentence for item in kept]),
                          config.textrank)
        converged = result.converged
        ranking = list(result.ranking)
        for item in ranking:
            trace[item.sentence.id]["centrality"] = item.score

    if config.stages == "full":
        selected = _greedy_trace(ranking, config, trace)
    else:
        selected = [item.sentence for item in ranking[: config.redundancy.budget]]
        for item in ranking[config.redundancy.budget :]:
            trace[item.sentence.id]["drop_reason"] = "over_budget"
    for sentence in selected:
        trace[sentence.id]["selected"] = True

    return SummaryResult(
        query=query,
        sentences=tuple(selected),
        stage_trace=tuple(trace[s.id] for s in sorted(sentences, key=lambda x: x.id)),
        config=config.summary(),
        centrality_converged=converged,
    )


def _greedy_trace(
    ranking: list[ScoredSentence],
    config: PipelineConfig,
    trace: dict[str, dict],
) -> list[AnswerSentence]:
    """Stage 3: embed the ranked candidates and greedy-select, recording
    which earlier selection knocked out each redundant candidate."""
    texts = [item.sentence.text for item in ranking]
    try:
        embedder = _resolve_embedder(config.embedder, texts)
        vectors = embedder.embed(texts)
    except StageError:
        raise
    except Exception as exc:
        raise StageError("embedding", exc) from exc
    if len(vectors) != len(texts):
        raise StageError(
            "embedding",
            ValueError(f"embedder returned {len(vectors)} vectors for "
                       f"{len(texts)} sentences"),
        )

    selected: list[AnswerSentence] = []
    selected_vectors: list[np.ndarray] = []
    for item, vector in zip(ranking, vectors):
        record = trace[item.sentence.id]
        if selected:
            similarities = [
                cosine_similarity(vector, vec) for vec in selected_vectors
            ]
            worst = int(np.argmax(similarities))
            if similarities[worst] > config.redundancy.threshold:
                record["drop_reason"] = "redundant"
                record["redundant_with"] = selected[worst].id
                record["similarity"] = float(similarities[worst])
                continue
        selected.append(item.sentence)
        selected_vectors.append(vector)

    for sentence in selected[config.redundancy.budget :]:
        trace[sentence.id]["drop_reason"] = "over_budget"
    return selected[: config.redundancy.budget]


def summarize(
    query: TechnicalQuery, unit: AnnotationUnit, config: PipelineConfig
) -> SummaryResult:
    """Summarize an annotation unit's sentences for ``query``."""
    return summarize_sentences(query, list(unit.sentences), config)


def summarize_benchmark(
    entries: list[BenchmarkEntry], config: PipelineConfig
) -> list[BenchmarkItemResult]:
    """Summarize every benchmark entry, isolating per-entry failures."""
    results = []
    for index, entry in enumerate(entries):
        try:
            result = summarize_sentences(
                entry.query, list(entry.candidates), config
            )
            results.append(BenchmarkItemResult(entry_index=index, result=result))
        except Exception as exc:
            results.append(BenchmarkItemResult(entry_index=index, error=str(exc)))
    return results
