"""Scorer contracts, deterministic baselines, and the remote-scorer client.

Two pluggable behaviors drive the pipeline: a usefulness scorer mapping
(query, sentences) to scores in [0, 1], and a sentence embedder mapping
sentences to fixed-dimension vectors.  Deterministic baselines (lexical
overlap, per-corpus TF-IDF) make the pipeline testable standalone; the
remote client speaks the JSON-over-HTTP wire protocol and never lets a
malformed response through.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Protocol, runtime_checkable

import numpy as np
import requests

from .textutil import tokenize

DEFAULT_BATCH_SIZE = 64


class ScorerError(Exception):
    """Base class for scorer client failures."""


class ScorerTransportError(ScorerError):
    """The service could not be reached; safe to retry."""

    retryable = True


class ScorerProtocolError(ScorerError):
    """The service answered, but the response violates the wire contract."""

    retryable = False


@runtime_checkable
class UsefulnessScorer(Protocol):
    def score(self, query: str, sentences: list[str]) -> list[float]: ...


@runtime_checkable
class SentenceEmbedder(Protocol):
    def embed(self, sentences: list[str]) -> list[np.ndarray]: ...


def lexical_usefulness(query: str, sentences: list[str]) -> list[float]:
    """Fraction of the query's distinct tokens that each sentence covers."""
    query_tokens = set(tokenize(query))
    if not query_tokens:
        raise ValueError("query has no tokens")
    scores = []
    for sentence in sentences:
        overlap = query_tokens & set(tokenize(sentence))
        scores.append(len(overlap) / len(query_tokens))
    return scores


class LexicalUsefulnessScorer:
    """UsefulnessScorer backed by :func:`lexical_usefulness`."""

    def score(self, query: str, sentences: list[str]) -> list[float]:
        return lexical_usefulness(query, sentences)


class TfidfEmbedder:
    """Per-corpus TF-IDF embedder with L2-normalized vectors.

    The vocabulary and document frequencies come from the corpus given at
    construction; idf = 1 + ln(N / df).  Sentences embedded later are
    projected onto that vocabulary, so a sentence sharing no token with the
    corpus maps to the zero vector.
    """

    def __init__(self, corpus: list[str]):
        if not corpus:
            raise ValueError("corpus must be non-empty")
        doc_tokens = [tokenize(text) for text in corpus]
        vocab = sorted({t for tokens in doc_tokens for t in tokens})
        self._index = {term: i for i, term in enumerate(vocab)}
        df = Counter(t for tokens in doc_tokens for t in set(tokens))
        n_docs = len(corpus)
        self._idf = np.zeros(len(vocab))
        for term, i in self._index.items():
            self._idf[i] = 1.0 + math.log(n_docs / df[term])

    @property
    def dim(self) -> int:
        return len(self._index)

    def embed(self, sentences: list[str]) -> list[np.ndarray]:
        vectors = []
        for sentence in sentences:
            vec = np.zeros(self.dim)
            for term, count in Counter(tokenize(sentence)).items():
                i = self._index.get(term)
                if i is not None:
                    vec[i] = count * self._idf[i]
            norm = np.linalg.norm(vec)
            if norm > 0:
                vec /= norm
            vectors.append(vec)
        return vectors


def tfidf_embed(corpus: list[str]) -> TfidfEmbedder:
    """Build a TF-IDF embedder over ``corpus``."""
    return TfidfEmbedder(corpus)


class TfidfUsefulnessScorer:
    """Deterministic scorer variant: cosine of TF-IDF vectors vs the query.

    TF-IDF components are non-negative, so scores land in [0, 1].
    """

    def score(self, query: str, sentences: list[str]) -> list[float]:
        if not set(tokenize(query)):
            raise ValueError("query has no tokens")
        embedder = TfidfEmbedder([query, *sentences])
        query_vec, *sentence_vecs = embedder.embed([query, *sentences])
        return [
            min(1.0, max(0.0, cosine_similarity(query_vec, vec)))
            for vec in sentence_vecs
        ]


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of two vectors; zero-norm inputs compare as 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0:
        return 0.0
    return float(np.clip(np.dot(a, b) / norm, -1.0, 1.0))


# --------------------------------------------------------------------------
# Remote scorer client
# --------------------------------------------------------------------------


def validate_scores(scores: object, expected: int) -> list[float]:
    """Check a /score response body; raise ScorerProtocolError on violation."""
    if not isinstance(scores, list) or len(scores) != expected:
        raise ScorerProtocolError(
            f"expected {expected} scores, got "
            f"{len(scores) if isinstance(scores, list) else type(scores).__name__}"
        )
    out = []
    for i, value in enumerate(scores):
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ScorerProtocolError(f"score {i} is not a number: {value!r}")
        value = float(value)
        if not math.isfinite(value) or not 0.0 <= value <= 1.0:
            raise ScorerProtocolError(f"score {i} out of [0, 1]: {value}")
        out.append(value)
    return out


def validate_vectors(vectors: object, expected: int) -> list[np.ndarray]:
    """Check an /embed response body; raise ScorerProtocolError on violation."""
    if not isinstance(vectors, list) or len(vectors) != expected:
        raise ScorerProtocolError(
            f"expected {expected} vectors, got "
            f"{len(vectors) if isinstance(vectors, list) else type(vectors).__name__}"
        )
    out = []
    dim = None
    for i, values in enumerate(vectors):
        if not isinstance(values, list) or not values:
            raise ScorerProtocolError(f"vector {i} is not a non-empty list")
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise ScorerProtocolError(
                f"vector {i} has dimension {len(values)}, expected {dim}"
            )
        arr = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ScorerProtocolError(f"vector {i} contains non-finite values")
        out.append(arr)
    return out


class RemoteScorer:
    """Client for a scorer service; implements both pipeline contracts.

    Requests are batched (``batch_size`` sentences per call, default 64).
    Transport failures raise :class:`ScorerTransportError`; responses that
    break alignment, range, dimension, or finiteness raise
    :class:`ScorerProtocolError`.
    """

    def __init__(self, endpoint: str, batch_size: int = DEFAULT_BATCH_SIZE,
                 timeout: float = 30.0):
        self.endpoint = endpoint.rstrip("/")
        self.batch_size = batch_size
        self.timeout = timeout
        self._session = requests.Session()

    def _post(self, route: str, payload: dict) -> dict:
        try:
            response = self._session.post(
                self.endpoint + route, json=payload, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise ScorerTransportError(f"POST {route} failed: {exc}") from exc
        if response.status_code != 200:
            raise ScorerProtocolError(
                f"POST {route} returned HTTP {response.status_code}"
            )
        try:
            return response.json()
        except ValueError as exc:
            raise ScorerProtocolError(f"POST {route} returned non-JSON body") from exc

    def health(self) -> dict:
        try:
            response = self._session.get(
                self.endpoint + "/health", timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise ScorerTransportError(f"GET /health failed: {exc}") from exc
        if response.status_code != 200:
            raise ScorerProtocolError(f"GET /health returned HTTP {response.status_code}")
        return response.json()

    def _batches(self, sentences: list[str]) -> Iterable[list[str]]:
        for start in range(0, len(sentences), self.batch_size):
            yield sentences[start : start + self.batch_size]

    def score(self, query: str, sentences: list[str]) -> list[float]:
        scores: list[float] = []
        for batch in self._batches(sentences):
            body = self._post("/score", {"query": query, "sentences": batch})
            scores.extend(validate_scores(body.get("scores"), len(batch)))
        return scores

    def embed(self, sentences: list[str]) -> list[np.ndarray]:
        vectors: list[np.ndarray] = []
        for batch in self._batches(sentences):
            body = self._post("/embed", {"sentences": batch})
            vectors.extend(validate_vectors(body.get("vectors"), len(batch)))
        if vectors:
            dim = vectors[0].shape[0]
            for i, vec in enumerate(vectors):
                if vec.shape[0] != dim:
                    raise ScorerProtocolError(
                        f"vector {i} has dimension {vec.shape[0]}, expected {dim}"
                    )
        return vectors


def remote_score(endpoint: str, query: str, sentences: list[str]) -> list[float]:
    """One-shot /score call through a throwaway client."""
    return RemoteScorer(endpoint).score(query, sentences)


def remote_embed(endpoint: str, sentences: list[str]) -> list[np.ndarray]:
    """One-shot /embed call through a throwaway client."""
    return RemoteScorer(endpoint).embed(sentences)
