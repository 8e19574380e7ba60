"""Training objectives, the 9:1 split, and threshold tuning.

The usefulness classifier trains with the binary cross entropy

    loss = -(y * log(p_pos) + (1 - y) * log(p_neg))

averaged per batch.  The embedder trains with the in-batch contrastive
objective over triplet batches: for anchor i the positive logit is
sim(r_i, r_i+)/tau and the denominator runs over every positive and every
hard negative in the batch,

    loss_i = -log( e^{sim(r_i, r_i+)/tau}
                   / sum_j ( e^{sim(r_i, r_j+)/tau} + e^{sim(r_i, r_j-)/tau} ) ).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
import torch
import torch.nn.functional as F

from .models import ContrastiveEmbedder, UsefulnessClassifier
from . import vocab

DEFAULT_TAU = 0.05


@dataclass(frozen=True)
class UsefulnessExample:
    query: str
    sentence: str
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")


@dataclass
class UsefulnessHyper:
    lr: float = 5e-5
    batch_size: int = 16
    epochs: int = 3
    seed: int = 0


@dataclass
class EmbedderHyper:
    lr: float = 5e-5
    batch_size: int = 64
    epochs: int = 3
    tau: float = DEFAULT_TAU
    seed: int = 0


@dataclass
class TrainingReport:
    epoch_losses: list[float] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def load_usefulness_tsv(path) -> list[UsefulnessExample]:
    """Read query<TAB>sentence<TAB>label rows.

    Labels 0/1 pass through; the 4-way relevance codes used by large QA
    dumps map to binary (4 -> positive, everything else negative).
    """
    examples = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            query, sentence, raw = line.split("\t")[:3]
            label = int(raw)
            if label > 1:
                label = 1 if label == 4 else 0
            examples.append(UsefulnessExample(query, sentence, label))
    return examples


def split_train_test(items: list, ratio: float = 0.9, seed: int = 0):
    """Deterministic shuffle split; returns (train, test)."""
    shuffled = list(items)
    random.Random(seed).shuffle(shuffled)
    cut = int(len(shuffled) * ratio)
    return shuffled[:cut], shuffled[cut:]


def train_usefulness(
    dataset: list[UsefulnessExample],
    hyper: UsefulnessHyper | None = None,
    model: UsefulnessClassifier | None = None,
) -> tuple[UsefulnessClassifier, TrainingReport]:
    if not dataset:
        raise ValueError("dataset must be non-empty")
    hyper = hyper or UsefulnessHyper()
    torch.manual_seed(hyper.seed)
    model = model or UsefulnessClassifier()
    optimizer = torch.optim.Adam(model.parameters(), lr=hyper.lr)
    report = TrainingReport()

    encoded = torch.tensor(
        [vocab.encode_pair(ex.query, ex.sentence, model.vocab_size,
                           model.max_len)
         for ex in dataset],
        dtype=torch.long,
    )
    all_labels = torch.tensor([float(ex.label) for ex in dataset])

    order = list(range(len(dataset)))
    rng = random.Random(hyper.seed)
    for _ in range(hyper.epochs):
        rng.shuffle(order)
        model.train()
        losses = []
        for start in range(0, len(order), hyper.batch_size):
            index = torch.tensor(order[start : start + hyper.batch_size])
            tokens = encoded[index]
            labels = all_labels[index]
            probs = model(tokens).clamp(1e-7, 1 - 1e-7)
            loss = F.binary_cross_entropy(probs, labels)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
        report.epoch_losses.append(sum(losses) / len(losses))
    return model, report


def contrastive_loss(
    anchors: torch.Tensor,
    positives: torch.Tensor,
    negatives: torch.Tensor,
    tau: float,
) -> torch.Tensor:
    """In-batch contrastive objective over a triplet batch."""
    a = F.normalize(anchors, dim=1)
    p = F.normalize(positives, dim=1)
    n = F.normalize(negatives, dim=1)
    logits = torch.cat([a @ p.T, a @ n.T], dim=1) / tau
    targets = torch.arange(len(a), device=a.device)
    return F.cross_entropy(logits, targets)


def train_embedder(
    triplets: list,
    hyper: EmbedderHyper | None = None,
    model: ContrastiveEmbedder | None = None,
) -> tuple[ContrastiveEmbedder, TrainingReport]:
    """Train on a 9:1 split of ``triplets``; the held-out 10% is used for
    the separation report.  Triplets are (anchor, positive, negative)
    objects or dicts in the mining JSONL format."""
    hyper = hyper or EmbedderHyper()
    if hyper.batch_size < 2:
        raise ValueError("batch_size must be >= 2 for in-batch negatives")
    triplets = [_as_triplet(t) for t in triplets]
    if len(triplets) < 2:
        raise ValueError("need at least two triplets")
    torch.manual_seed(hyper.seed)
    model = model or ContrastiveEmbedder()
    optimizer = torch.optim.Adam(model.parameters(), lr=hyper.lr)
    report = TrainingReport()

    train, test = split_train_test(triplets, ratio=0.9, seed=hyper.seed)
    if not train:
        train, test = triplets, []

    tokens = [
        vocab.batch_sentences([t[part] for t in train], model.vocab_size,
                              model.max_len)
        for part in range(3)
    ]

    for _ in range(hyper.epochs):
        model.train()
        losses = []
        order = list(range(len(train)))
        random.Random(hyper.seed).shuffle(order)
        for start in range(0, len(order), hyper.batch_size):
            index = torch.tensor(order[start : start + hyper.batch_size])
            if len(index) < 2:
                continue
            anchors = model(tokens[0][index])
            positives = model(tokens[1][index])
            negatives = model(tokens[2][index])
            loss = contrastive_loss(anchors, positives, negatives, hyper.tau)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
        report.epoch_losses.append(sum(losses) / len(losses))

    report.extra["train_size"] = len(train)
    report.extra["test_size"] = len(test)
    if test:
        report.extra["held_out_separation"] = separation_rate(model, test)
    return model, report


def _as_triplet(item) -> tuple[str, str, str]:
    if isinstance(item, dict):
        return (item["anchor"], item["positive"], item["negative"])
    if hasattr(item, "anchor"):
        return (item.anchor, item.positive, item.negative)
    anchor, positive, negative = item
    return (anchor, positive, negative)


def separation_rate(model: ContrastiveEmbedder, triplets: list) -> float:
    """Fraction of triplets with cos(anchor, positive) > cos(anchor, negative)."""
    triplets = [_as_triplet(t) for t in triplets]
    if not triplets:
        raise ValueError("no triplets to evaluate")
    with torch.no_grad():
        model.eval()
        a = F.normalize(model.encode_batch([t[0] for t in triplets]), dim=1)
        p = F.normalize(model.encode_batch([t[1] for t in triplets]), dim=1)
        n = F.normalize(model.encode_batch([t[2] for t in triplets]), dim=1)
        wins = ((a * p).sum(dim=1) > (a * n).sum(dim=1)).float()
    return float(wins.mean())


def tune_threshold(
    embedder: ContrastiveEmbedder,
    pairs: list[tuple[str, str, int]],
    grid_step: float = 0.01,
) -> float:
    """Sweep the duplicate-detection threshold; return the accuracy argmax.

    ``pairs`` are (title_a, title_b, is_duplicate) with a binary flag.
    A pair counts as predicted-duplicate when cosine > T.  Ties resolve to
    the smallest threshold, scanning the grid in ascending order.
    """
    if not pairs:
        raise ValueError("pairs must be non-empty")
    with torch.no_grad():
        embedder.eval()
        a = F.normalize(embedder.encode_batch([p[0] for p in pairs]), dim=1)
        b = F.normalize(embedder.encode_batch([p[1] for p in pairs]), dim=1)
        sims = (a * b).sum(dim=1).numpy()
    labels = np.array([int(p[2]) for p in pairs])

    best_threshold = 0.0
    best_accuracy = -1.0
    for step in range(int(round(1.0 / grid_step)) + 1):
        threshold = step * grid_step
        predicted = (sims > threshold).astype(int)
        accuracy = float((predicted == labels).mean())
        if accuracy > best_accuracy:
            best_accuracy = accuracy
            best_threshold = threshold
    return round(best_threshold, 10)
