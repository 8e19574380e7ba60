"""Command-line surface: summarize, evaluate, extract-units, build-triplets.

Exit codes: 0 success, 1 I/O or input-format errors, 2 scorer-protocol
failures.  All randomness funnels through ``--seed``; identical inputs,
flags, and seed produce byte-identical outputs.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import corpus, dump_ingest, rouge
from .centrality import TextRankConfig
from .pipeline import (
    PipelineConfig,
    StageError,
    summarize_benchmark,
    summarize_sentences,
)
from .redundancy import RedundancyConfig
from .scoring import (
    LexicalUsefulnessScorer,
    RemoteScorer,
    ScorerError,
    TfidfEmbedder,
    TfidfUsefulnessScorer,
)

EXIT_INPUT_ERROR = 1
EXIT_SCORER_ERROR = 2


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, ScorerError):
        return EXIT_SCORER_ERROR
    if isinstance(exc, StageError) and isinstance(exc.cause, ScorerError):
        return EXIT_SCORER_ERROR
    return EXIT_INPUT_ERROR


def _build_config(scorer, endpoint, top_k, threshold, budget, damping,
                  convergence, max_iterations, stages) -> PipelineConfig:
    if scorer == "remote":
        if not endpoint:
            _fail("remote scorer mode requires --endpoint "
                  "(or ANSWERSUM_ENDPOINT)", EXIT_INPUT_ERROR)
        client = RemoteScorer(endpoint)
        usefulness, embedder = client, client
    elif scorer == "tfidf":
        usefulness, embedder = TfidfUsefulnessScorer(), TfidfEmbedder
    else:
        usefulness, embedder = LexicalUsefulnessScorer(), TfidfEmbedder
    return PipelineConfig(
        usefulness_scorer=usefulness,
        embedder=embedder,
        top_k=top_k,
        textrank=TextRankConfig(
            damping=damping,
            convergence_threshold=convergence,
            max_iterations=max_iterations,
        ),
        redundancy=RedundancyConfig(threshold=threshold, budget=budget),
        stages=stages,
        scorer_label=scorer,
    )


def _scoring_options(command):
    decorators = [
        click.option("--scorer", type=click.Choice(["lexical", "tfidf", "remote"]),
                     default="lexical", show_default=True,
                     help="Usefulness scorer backend."),
        click.option("--endpoint", envvar="ANSWERSUM_ENDPOINT", default=None,
                     help="Scorer service URL (remote mode); honors "
                          "ANSWERSUM_ENDPOINT."),
        click.option("--top-k", type=int, default=30, show_default=True,
                     help="Usefulness pre-selection size."),
        click.option("--threshold", type=float, default=0.8, show_default=True,
                     help="Redundancy cosine threshold."),
        click.option("--budget", type=int, default=5, show_default=True,
                     help="Summary sentence budget."),
        click.option("--damping", type=float, default=0.85, show_default=True,
                     help="Centrality damping factor."),
        click.option("--convergence", type=float, default=0.0001,
                     show_default=True, help="Centrality convergence threshold."),
        click.option("--max-iterations", type=int, default=1000,
                     show_default=True, help="Centrality iteration cap."),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


@click.group()
@click.version_option()
def main():
    """Extractive answer summarization for technical queries."""


@main.command()
@click.argument("unit_file", type=click.Path())
@click.argument("query_text", required=False, default=None)
@_scoring_options
@click.option("--stages", type=click.Choice(["stage1", "stage12", "full"]),
              default="full", show_default=True,
              help="How many pipeline stages to run.")
@click.option("--out", type=click.Path(), default=None,
              help="Write the full summary result (with stage trace) as JSON.")
def summarize(unit_file, query_text, scorer, endpoint, top_k, threshold,
              budget, damping, convergence, max_iterations, stages, out):
    """Summarize one annotation-unit file; prints "id<TAB>sentence" lines."""
    config = _build_config(scorer, endpoint, top_k, threshold, budget,
                           damping, convergence, max_iterations, stages)
    try:
        unit = corpus.load_unit(unit_file)
    except (OSError, corpus.UnitFormatError) as exc:
        _fail(f"cannot load unit file {unit_file}: {exc}", EXIT_INPUT_ERROR)

    query = unit.query
    if query_text:
        query = corpus.TechnicalQuery(text=query_text, tags=query.tags)
    try:
        result = summarize_sentences(query, list(unit.sentences), config)
    except Exception as exc:
        _fail(str(exc), _exit_code_for(exc))

    for sentence in result.sentences:
        click.echo(f"{sentence.id}\t{sentence.text}")
    if out:
        Path(out).write_text(result.to_json(), encoding="utf-8")


@main.command()
@click.argument("benchmark_file", type=click.Path())
@_scoring_options
@click.option("--ablation", type=click.Choice(["stage1", "stage12", "full"]),
              default="full", show_default=True,
              help="Pipeline stages to include.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Parallel workers; output order stays by entry.")
@click.option("--out", type=click.Path(), default=None,
              help="Write the evaluation report as JSON.")
@click.option("--summaries-out", type=click.Path(), default=None,
              help="Write every per-entry summary result (with traces) as JSON.")
def evaluate(benchmark_file, scorer, endpoint, top_k, threshold, budget,
             damping, convergence, max_iterations, ablation, jobs, out,
             summaries_out):
    """Summarize a benchmark file and report ROUGE-1/2/L."""
    config = _build_config(scorer, endpoint, top_k, threshold, budget,
                           damping, convergence, max_iterations, ablation)
    try:
        entries = corpus.load_benchmark(benchmark_file)
    except (OSError, corpus.BenchmarkFormatError) as exc:
        _fail(f"cannot load benchmark {benchmark_file}: {exc}", EXIT_INPUT_ERROR)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            batches = list(
                pool.map(lambda e: summarize_benchmark([e], config), entries)
            )
        outcomes = [batch[0] for batch in batches]
    else:
        outcomes = summarize_benchmark(entries, config)

    failures = [o for o in outcomes if o.error is not None]
    for outcome in failures:
        click.echo(f"entry {outcome.entry_index} failed: {outcome.error}",
                   err=True)
    if failures:
        code = EXIT_SCORER_ERROR if any(
            "stage failed" in (o.error or "") for o in failures
        ) else EXIT_INPUT_ERROR
        _fail(f"{len(failures)} of {len(entries)} entries failed", code)

    results = [o.result for o in outcomes]
    report = rouge.evaluate_benchmark(results, entries)
    click.echo(report.to_table(system=f"{scorer}/{ablation}"))
    if out:
        rouge.save_report(report, out)
    if summaries_out:
        payload = {"summaries": [r.to_dict() for r in results]}
        Path(summaries_out).write_text(
            json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)
            + "\n",
            encoding="utf-8",
        )


def _echo_counts(counts: Counter) -> None:
    for key in sorted(counts):
        click.echo(f"{key}: {counts[key]}")


@main.command("extract-units")
@click.argument("posts_path", type=click.Path())
@click.argument("postlinks_path", type=click.Path())
@click.option("--language", "languages", multiple=True,
              default=("java", "python"), show_default=True,
              help="Language tag filter; repeatable.")
@click.option("--out", type=click.Path(), required=True,
              help="Output units JSON path.")
def extract_units(posts_path, postlinks_path, languages, out):
    """Mine annotation units from Posts.xml and PostLinks.xml."""
    counts = Counter()
    try:
        store = dump_ingest.PostStore.from_file(posts_path, counts)
        with open(postlinks_path, "rb") as stream:
            links = list(dump_ingest.parse_postlinks(stream, counts))
        units = dump_ingest.extract_annotation_units(
            links, store, frozenset(languages), counts
        )
        corpus.save_units(units, out)
    except (OSError, dump_ingest.DumpParseError) as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)
    _echo_counts(counts)
    click.echo(f"wrote {len(units)} units to {out}")


@main.command("build-triplets")
@click.argument("posts_path", type=click.Path())
@click.argument("postlinks_path", type=click.Path())
@click.option("--language", "languages", multiple=True,
              default=("java", "python"), show_default=True,
              help="Language tag filter; repeatable.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="RNG seed for negative sampling.")
@click.option("--negatives-from-all-languages", is_flag=True, default=False,
              show_default=True,
              help="Sample negatives from every question, not just the "
                   "requested languages.")
@click.option("--out", type=click.Path(), required=True,
              help="Output JSON-lines path.")
def build_triplets(posts_path, postlinks_path, languages, seed,
                   negatives_from_all_languages, out):
    """Mine contrastive title triplets from duplicate links."""
    counts = Counter()
    try:
        store = dump_ingest.PostStore.from_file(posts_path, counts)
        with open(postlinks_path, "rb") as stream:
            links = list(dump_ingest.parse_postlinks(stream, counts))
        triplets = dump_ingest.build_contrastive_triplets(
            links,
            store,
            frozenset(languages),
            rng_seed=seed,
            negatives_from_all_languages=negatives_from_all_languages,
            counts=counts,
        )
        written = dump_ingest.write_triplets_jsonl(triplets, out)
    except (OSError, dump_ingest.DumpParseError) as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)
    _echo_counts(counts)
    click.echo(f"wrote {written} triplets to {out}")


if __name__ == "__main__":
    main()
