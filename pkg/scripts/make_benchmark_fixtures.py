#!/usr/bin/env python3
"""Generate the shipped benchmark fixtures and the golden summary.

``benchmark_full.json`` carries 37 entries with 3 reference summaries each
(111 references, 5 sentences per reference) and a mean reference length of
106.45 whitespace words; ``benchmark_mini.json`` is a 2-entry cut for
quick tests.  ``golden_summary.json`` freezes one run of the fully
deterministic pipeline (lexical usefulness + per-unit TF-IDF embeddings)
over the shipped 12-answer unit.
"""

import json
import random
from pathlib import Path

from answersum import corpus, pipeline
from answersum.corpus import (
    AnswerSentence,
    BenchmarkEntry,
    TechnicalQuery,
    save_benchmark,
    sentence_id,
)
from answersum.scoring import LexicalUsefulnessScorer, TfidfEmbedder

DATA = Path(__file__).resolve().parent.parent / "src" / "answersum" / "data"

N_ENTRIES = 37
REFS_PER_ENTRY = 3
TARGET_TOTAL_WORDS = 11816  # 111 references averaging 106.45 words

ACTIONS = ["sort", "merge", "filter", "parse", "cache", "stream", "validate",
           "serialize", "index", "batch", "retry", "profile", "chunk"]
OBJECTS = ["a list", "a map", "a queue", "json payloads", "log files",
           "database rows", "config values", "byte buffers", "user sessions",
           "thread pools", "string builders", "temp files", "api responses"]
LANGS = ["java", "python"]
DETAILS = [
    "without copying the underlying data", "while keeping the original order",
    "when the input does not fit in memory", "before the first request arrives",
    "without blocking the main thread", "with predictable worst case cost",
    "while handling malformed records gracefully", "under heavy concurrent load",
    "without pulling in extra dependencies", "when latency matters more than throughput",
    "with clear error messages on failure", "while staying compatible with older runtimes",
]
OPENERS = ["The usual approach is to", "Most codebases simply",
           "A robust option is to", "For small inputs you can",
           "The standard library can", "Production services often",
           "One proven pattern is to", "In practice teams prefer to"]
CLOSERS = ["and measure before optimizing further",
           "which keeps the code easy to review",
           "so failures stay visible in the logs",
           "and document the tradeoff for the next reader",
           "since the simple path is usually fast enough",
           "while tests pin the behavior down",
           "because the edge cases hide there",
           "and profile the hot path afterwards"]


def _sentence(rng, action, obj, lang):
    words = [
        rng.choice(OPENERS),
        action,
        obj,
        "in",
        lang,
        rng.choice(DETAILS),
    ]
    if rng.random() < 0.55:
        words.append(rng.choice(CLOSERS))
    return " ".join(words) + "."


def _entry(rng, index):
    action = rng.choice(ACTIONS)
    obj = rng.choice(OBJECTS)
    lang = rng.choice(LANGS)
    query = f"how to {action} {obj} in {lang}"

    n_answers = rng.randint(4, 6)
    candidates = []
    for a in range(n_answers):
        for s in range(1, rng.randint(3, 5)):
            topic_action = action if rng.random() < 0.6 else rng.choice(ACTIONS)
            text = _sentence(rng, topic_action, obj, lang)
            candidates.append(
                AnswerSentence(id=sentence_id(a, s), text=text,
                               answer_index=a, sentence_index=s)
            )

    references = []
    for _ in range(REFS_PER_ENTRY):
        picks = rng.sample(candidates, 5)
        references.append(tuple(p.text for p in picks))

    return BenchmarkEntry(
        query=TechnicalQuery(text=query, tags=frozenset({lang})),
        candidates=tuple(candidates),
        references=tuple(references),
    )


TAIL_WORDS = ["eventually", "regardless", "consistently", "carefully",
              "deliberately", "pragmatically"]


def _pad_to_target(entries, rng):
    """Spread filler words over reference tails until the total is exact."""
    refs = [[list(ref) for ref in entry.references] for entry in entries]
    total = sum(
        len(sentence.split())
        for entry_refs in refs
        for ref in entry_refs
        for sentence in ref
    )
    missing = TARGET_TOTAL_WORDS - total
    if missing < 0:
        raise SystemExit(f"overshot target by {-missing} words; lower sentence sizes")
    flat = [(e, r) for e, entry_refs in enumerate(refs)
            for r in range(len(entry_refs))]
    for k in range(missing):
        e, r = flat[k % len(flat)]
        sentence = refs[e][r][-1].rstrip(".")
        refs[e][r][-1] = sentence + " " + rng.choice(TAIL_WORDS) + "."
    return [
        BenchmarkEntry(
            query=entry.query,
            candidates=entry.candidates,
            references=tuple(tuple(ref) for ref in refs[e]),
        )
        for e, entry in enumerate(entries)
    ]


def main() -> None:
    rng = random.Random(20240612)
    entries = [_entry(rng, i) for i in range(N_ENTRIES)]
    entries = _pad_to_target(entries, rng)

    totals = [
        sum(len(s.split()) for s in ref)
        for entry in entries
        for ref in entry.references
    ]
    mean = sum(totals) / len(totals)
    print(f"references: {len(totals)}, mean words: {mean:.4f}")

    save_benchmark(entries, DATA / "benchmark_full.json")
    save_benchmark(entries[:2], DATA / "benchmark_mini.json")

    unit = corpus.load_unit(DATA / "unit_12answers.json")
    config = pipeline.PipelineConfig(
        usefulness_scorer=LexicalUsefulnessScorer(),
        embedder=TfidfEmbedder,
        scorer_label="lexical",
    )
    result = pipeline.summarize(unit.query, unit, config)
    (DATA / "golden_summary.json").write_text(result.to_json(), encoding="utf-8")
    print(f"golden summary ids: {[s.id for s in result.sentences]}")


if __name__ == "__main__":
    main()
