"""Centrality estimation over candidate sentences.

Candidates form an undirected sentence graph whose edge weights are the
count of distinct shared tokens divided by the sum of log sentence lengths
(natural log).  A damped, weight-normalized rank recursion then scores how
strongly each sentence is endorsed by lexically overlapping neighbors:

    R(i) <- (1 - phi) + phi * sum_j  w_ij / sum_k w_jk  * R(j)

Each neighbor j splits its endorsement across its own total edge weight, so
scaling all weights by a positive constant leaves the scores unchanged.
Nodes with no positive edges keep the floor score 1 - phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import AnswerSentence
from .textutil import tokenize

DEFAULT_DAMPING = 0.85
DEFAULT_CONVERGENCE_THRESHOLD = 0.0001
DEFAULT_MAX_ITERATIONS = 1000


@dataclass(frozen=True)
class TextRankConfig:
    damping: float = DEFAULT_DAMPING
    convergence_threshold: float = DEFAULT_CONVERGENCE_THRESHOLD
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.convergence_threshold <= 0:
            raise ValueError("convergence_threshold must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class SentenceGraph:
    nodes: tuple[AnswerSentence, ...]
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", weights)
        n = len(self.nodes)
        if weights.shape != (n, n):
            raise ValueError(f"weight matrix must be {n}x{n}, got {weights.shape}")
        if not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite")
        if np.any(weights < 0):
            raise ValueError("weights must be non-negative")
        if not np.allclose(weights, weights.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(weights) != 0):
            raise ValueError("weight matrix must have a zero diagonal")


@dataclass(frozen=True)
class ScoredSentence:
    """A sentence paired with one stage's ranking score."""

    sentence: AnswerSentence
    score: float


@dataclass(frozen=True)
class TextRankResult:
    ranking: tuple[ScoredSentence, ...]
    converged: bool
    iterations: int


def edge_weight(s_i: list[str], s_j: list[str]) -> float:
    """Distinct shared tokens over the sum of log token counts.

    Degenerate denominators (single-token or empty sentences) and empty
    overlaps both give weight 0.
    """
    overlap = len(set(s_i) & set(s_j))
    if overlap == 0 or not s_i or not s_j:
        return 0.0
    denominator = math.log(len(s_i)) + math.log(len(s_j))
    if denominator <= 0:
        return 0.0
    return overlap / denominator


def build_graph(sentences: list[AnswerSentence]) -> SentenceGraph:
    """Build the token-overlap sentence graph."""
    if not sentences:
        raise ValueError("need at least one sentence")
    token_lists = [tokenize(s.text) for s in sentences]
    n = len(sentences)
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            weight = edge_weight(token_lists[i], token_lists[j])
            weights[i, j] = weight
            weights[j, i] = weight
    return SentenceGraph(nodes=tuple(sentences), weights=weights)


def textrank(graph: SentenceGraph, config: TextRankConfig | None = None) -> TextRankResult:
    """Iterate the rank recursion to a fixed point.

    Starts from R = 1 for every node (the fixed point does not depend on
    the start, and a fixed start keeps runs bit-reproducible) and stops when
    the max-norm of the score change drops below the convergence threshold.
    If ``max_iterations`` is exhausted first, the current scores are
    returned with ``converged=False``.
    """
    if config is None:
        config = TextRankConfig()
    n = len(graph.nodes)
    weights = graph.weights
    out_weight = weights.sum(axis=1)
    safe_out = np.where(out_weight > 0, out_weight, 1.0)

    ranks = np.ones(n)
    base = 1.0 - config.damping
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        contributions = weights @ (ranks / safe_out)
        updated = base + config.damping * contributions
        delta = np.max(np.abs(updated - ranks))
        ranks = updated
        if delta < config.convergence_threshold:
            converged = True
            break

    order = sorted(range(n), key=lambda i: (-ranks[i], graph.nodes[i].id))
    ranking = tuple(
        ScoredSentence(sentence=graph.nodes[i], score=float(ranks[i])) for i in order
    )
    return TextRankResult(ranking=ranking, converged=converged, iterations=iterations)


def rank_by_centrality(
    sentences: list[AnswerSentence], config: TextRankConfig | None = None
) -> TextRankResult:
    """Build the graph and rank ``sentences`` by their converged scores."""
    return textrank(build_graph(sentences), config)
