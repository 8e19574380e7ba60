"""Threshold-sweep tests on constructed separable embeddings."""

import math

import pytest
import torch

from scorer_service.training import tune_threshold

from toy_data import make_title_pairs


class _PlantedEmbedder:
    """Duck-typed embedder mapping titles to planted planar vectors.

    Duplicate pairs land at pairwise cosine ~0.9, non-duplicates ~0.3,
    with per-pair jitter so no similarity sits exactly on a grid point.
    """

    def __init__(self, pairs, dup_cos=0.9, nondup_cos=0.3):
        self._vectors = {}
        for i, (a, b, label) in enumerate(pairs):
            jitter = ((i * 37) % 17 - 8) / 1000.0
            target = (dup_cos if label else nondup_cos) + jitter
            angle = math.acos(target)
            self._vectors[a] = [1.0, 0.0]
            self._vectors[b] = [math.cos(angle), math.sin(angle)]
        self._expected = {
            (a, b): (dup_cos if label else nondup_cos) + ((i * 37) % 17 - 8) / 1000.0
            for i, (a, b, label) in enumerate(pairs)
        }

    def eval(self):
        return self

    def encode_batch(self, sentences):
        return torch.tensor([self._vectors[s] for s in sentences])


def _distinct_pairs(count):
    pairs = []
    for i in range(count):
        label = 1 if i % 2 == 0 else 0
        pairs.append((f"left title {i}", f"right title {i}", label))
    return pairs


class TestTuneThreshold:
    def test_separable_clusters_give_threshold_in_the_gap(self):
        pairs = _distinct_pairs(40)
        embedder = _PlantedEmbedder(pairs)
        threshold = tune_threshold(embedder, pairs)
        max_nondup = max(v for (a, b), v in embedder._expected.items()
                         if not dict((p[:2], p[2]) for p in pairs)[(a, b)])
        min_dup = min(v for (a, b), v in embedder._expected.items()
                      if dict((p[:2], p[2]) for p in pairs)[(a, b)])
        assert max_nondup < threshold < min_dup
        print(f"\nACCEPTANCE PASS: tuned threshold {threshold} lies strictly "
              f"inside ({max_nondup:.3f}, {min_dup:.3f})")

    def test_all_duplicates_degenerate_to_grid_minimum(self):
        pairs = [(a, b, 1) for a, b, _ in _distinct_pairs(10)]
        embedder = _PlantedEmbedder(pairs, dup_cos=0.9)
        assert tune_threshold(embedder, pairs) == 0.0

    def test_empty_pairs_rejected(self):
        embedder = _PlantedEmbedder([])
        with pytest.raises(ValueError):
            tune_threshold(embedder, [])

    def test_accuracy_maximizing_on_trained_toy_model(self):
        # end-to-end sanity: a real embedder over lexically separable pairs
        # still produces a threshold that beats the trivial extremes
        from scorer_service.training import EmbedderHyper, train_embedder
        from toy_data import make_triplets

        model, _ = train_embedder(make_triplets(300, seed=8),
                                  EmbedderHyper(epochs=1, seed=8))
        pairs = make_title_pairs(60, seed=9)
        threshold = tune_threshold(model, pairs)
        assert 0.0 <= threshold <= 1.0

        import numpy as np
        import torch.nn.functional as F

        with torch.no_grad():
            a = F.normalize(model.encode_batch([p[0] for p in pairs]), dim=1)
            b = F.normalize(model.encode_batch([p[1] for p in pairs]), dim=1)
            sims = (a * b).sum(dim=1).numpy()
        labels = np.array([p[2] for p in pairs])
        accuracy_at = lambda t: float(((sims > t).astype(int) == labels).mean())
        assert accuracy_at(threshold) >= max(accuracy_at(0.0), accuracy_at(1.0))
