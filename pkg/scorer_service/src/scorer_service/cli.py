"""Training and serving commands for the scorer service."""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import service, training
from .models import ContrastiveEmbedder, UsefulnessClassifier, save_artifact


@click.group()
def main():
    """Train and serve the usefulness scorer and sentence embedder."""


@main.command("train-usefulness")
@click.argument("tsv_path", type=click.Path(exists=True))
@click.option("--lr", type=float, default=5e-5, show_default=True)
@click.option("--batch-size", type=int, default=16, show_default=True)
@click.option("--epochs", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True,
              help="Artifact directory.")
def train_usefulness(tsv_path, lr, batch_size, epochs, seed, out):
    """Train the pair classifier on query<TAB>sentence<TAB>label rows."""
    dataset = training.load_usefulness_tsv(tsv_path)
    hyper = training.UsefulnessHyper(lr=lr, batch_size=batch_size,
                                     epochs=epochs, seed=seed)
    model, report = training.train_usefulness(dataset, hyper)
    save_artifact(model, out, {
        "data_size": len(dataset),
        "hyperparameters": vars(hyper),
        "epoch_losses": report.epoch_losses,
    })
    for i, loss in enumerate(report.epoch_losses, 1):
        click.echo(f"epoch {i}: mean loss {loss:.4f}")
    click.echo(f"saved artifact to {out}")


@main.command("train-embedder")
@click.argument("triplets_path", type=click.Path(exists=True))
@click.option("--lr", type=float, default=5e-5, show_default=True)
@click.option("--batch-size", type=int, default=64, show_default=True)
@click.option("--epochs", type=int, default=3, show_default=True)
@click.option("--tau", type=float, default=training.DEFAULT_TAU,
              show_default=True, help="Contrastive temperature.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-triplets", type=int, default=10_000, show_default=True,
              help="Cap on triplets read from the file.")
@click.option("--out", type=click.Path(), required=True,
              help="Artifact directory.")
def train_embedder(triplets_path, lr, batch_size, epochs, tau, seed,
                   max_triplets, out):
    """Train the embedder on mined (anchor, positive, negative) JSON lines."""
    triplets = []
    with open(triplets_path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                triplets.append(json.loads(line))
            if len(triplets) >= max_triplets:
                break
    hyper = training.EmbedderHyper(lr=lr, batch_size=batch_size,
                                   epochs=epochs, tau=tau, seed=seed)
    model, report = training.train_embedder(triplets, hyper)
    save_artifact(model, out, {
        "data_size": len(triplets),
        "hyperparameters": vars(hyper),
        "epoch_losses": report.epoch_losses,
        "evaluation": report.extra,
    })
    for i, loss in enumerate(report.epoch_losses, 1):
        click.echo(f"epoch {i}: mean loss {loss:.4f}")
    if "held_out_separation" in report.extra:
        click.echo(f"held-out separation: "
                   f"{report.extra['held_out_separation']:.3f}")
    click.echo(f"saved artifact to {out}")


@main.command("tune-threshold")
@click.argument("embedder_artifact", type=click.Path(exists=True))
@click.argument("pairs_path", type=click.Path(exists=True))
def tune_threshold(embedder_artifact, pairs_path):
    """Sweep the duplicate threshold on title_a<TAB>title_b<TAB>label rows."""
    from .models import load_artifact

    embedder, _ = load_artifact(embedder_artifact)
    pairs = []
    with open(pairs_path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            a, b, label = line.split("\t")[:3]
            pairs.append((a, b, int(label)))
    threshold = training.tune_threshold(embedder, pairs)
    click.echo(f"best threshold: {threshold}")


@main.command("serve")
@click.option("--usefulness", type=click.Path(exists=True), required=True,
              help="Usefulness classifier artifact directory.")
@click.option("--embedder", type=click.Path(exists=True), required=True,
              help="Embedder artifact directory.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8080, show_default=True)
def serve_cmd(usefulness, embedder, host, port):
    """Serve /score, /embed, and /health over HTTP."""
    service.serve(usefulness, embedder, host=host, port=port)


if __name__ == "__main__":
    main()
