"""Greedy redundancy removal over a centrality-ranked candidate list.

Candidates are scanned in rank order; a candidate is discarded when its
cosine similarity to any already-selected sentence exceeds the threshold
(strictly — a tie at the threshold is kept).  The scan always runs to the
end of the list and the final summary is the first ``budget`` survivors in
selection order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import AnswerSentence
from .scoring import cosine_similarity

DEFAULT_THRESHOLD = 0.8
DEFAULT_BUDGET = 5


@dataclass(frozen=True)
class RedundancyConfig:
    threshold: float = DEFAULT_THRESHOLD
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


def is_redundant(
    candidate: np.ndarray, selected: list[np.ndarray], threshold: float
) -> bool:
    """True iff the candidate is too close to any already-selected vector."""
    return any(
        cosine_similarity(candidate, vec) > threshold for vec in selected
    )


def greedy_select(
    ranked: list[tuple[AnswerSentence, np.ndarray]],
    config: RedundancyConfig | None = None,
) -> list[AnswerSentence]:
    """Select a low-redundancy summary from a centrality-ranked list.

    The top-ranked sentence is always kept; every later candidate is kept
    iff it is not redundant with the sentences kept so far.  The returned
    summary is the first ``budget`` kept sentences.
    """
    if config is None:
        config = RedundancyConfig()
    selected: list[AnswerSentence] = []
    selected_vectors: list[np.ndarray] = []
    for sentence, vector in ranked:
        if selected and is_redundant(vector, selected_vectors, config.threshold):
            continue
        selected.append(sentence)
        selected_vectors.append(vector)
    return selected[: config.budget]
