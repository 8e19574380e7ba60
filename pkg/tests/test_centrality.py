"""Tests for the sentence graph and the rank iteration."""

import math

import numpy as np
import pytest

from answersum.centrality import (
    SentenceGraph,
    TextRankConfig,
    build_graph,
    edge_weight,
    rank_by_centrality,
    textrank,
)
from answersum.corpus import AnswerSentence, sentence_id


def _sentences(*texts):
    return [
        AnswerSentence(id=sentence_id(0, i), text=text, answer_index=0,
                       sentence_index=i)
        for i, text in enumerate(texts, 1)
    ]


def _graph(weights, n_nodes=None):
    weights = np.asarray(weights, dtype=float)
    nodes = _sentences(*[f"node {i}" for i in range(n_nodes or len(weights))])
    return SentenceGraph(nodes=tuple(nodes), weights=weights)


def oracle_power_iteration(weights, damping, steps):
    """Plain-loop rank iteration, kept independent of the implementation."""
    n = len(weights)
    ranks = [1.0] * n
    for _ in range(steps):
        updated = []
        for i in range(n):
            total = 0.0
            for j in range(n):
                if weights[j][i] > 0:
                    out_j = sum(weights[j])
                    total += weights[j][i] / out_j * ranks[j]
            updated.append(1.0 - damping + damping * total)
        ranks = updated
    return ranks


class TestEdgeWeight:
    def test_disjoint_tokens(self):
        assert edge_weight(["a", "b"], ["c", "d"]) == 0.0

    def test_hand_value_two_shared_of_four(self):
        s_i = ["java", "map", "filter", "stream"]
        s_j = ["java", "map", "guide", "notes"]
        expected = 2 / (math.log(4) + math.log(4))
        assert edge_weight(s_i, s_j) == pytest.approx(expected)
        assert expected == pytest.approx(0.7213, abs=1e-4)

    def test_shared_tokens_counted_distinct(self):
        s_i = ["java", "java", "map", "filter"]
        s_j = ["java", "map", "map", "notes"]
        assert edge_weight(s_i, s_j) == pytest.approx(
            2 / (math.log(4) + math.log(4))
        )

    def test_single_token_sentences_degenerate(self):
        assert edge_weight(["same"], ["same"]) == 0.0

    def test_empty_sentences(self):
        assert edge_weight([], ["a"]) == 0.0


class TestBuildGraph:
    def test_single_sentence_zero_matrix(self):
        graph = build_graph(_sentences("only one sentence"))
        assert graph.weights.shape == (1, 1)
        assert graph.weights[0, 0] == 0.0

    def test_identical_sentences_equal_offdiagonals(self):
        text = "java map filter stream"
        graph = build_graph(_sentences(text, text, text))
        off = [graph.weights[i, j] for i in range(3) for j in range(3) if i != j]
        assert len(set(off)) == 1
        assert off[0] > 0

    def test_three_sentence_fixture_matches_hand_table(self):
        graph = build_graph(_sentences(
            "java streams map filter",
            "java map collections guide",
            "python map tuples",
        ))
        w01 = 2 / (math.log(4) + math.log(4))
        w02 = 1 / (math.log(4) + math.log(3))
        w12 = 1 / (math.log(4) + math.log(3))
        expected = np.array([
            [0.0, w01, w02],
            [w01, 0.0, w12],
            [w02, w12, 0.0],
        ])
        np.testing.assert_allclose(graph.weights, expected, atol=1e-12)

    def test_graph_validation(self):
        nodes = _sentences("a b", "c d")
        with pytest.raises(ValueError):
            SentenceGraph(nodes=tuple(nodes), weights=np.array([[0.0, 1.0],
                                                                [2.0, 0.0]]))
        with pytest.raises(ValueError):
            SentenceGraph(nodes=tuple(nodes), weights=np.array([[1.0, 0.5],
                                                                [0.5, 0.0]]))


class TestTextRank:
    def test_complete_symmetric_graph_scores_one(self):
        weights = np.array([
            [0.0, 0.3, 0.3],
            [0.3, 0.0, 0.3],
            [0.3, 0.3, 0.0],
        ])
        result = textrank(_graph(weights))
        assert result.converged
        for item in result.ranking:
            assert item.score == pytest.approx(1.0, abs=1e-4)

    def test_isolated_node_floor_score(self):
        result = textrank(_graph(np.zeros((1, 1))))
        assert result.converged
        assert result.ranking[0].score == pytest.approx(0.15, abs=1e-9)

    def test_isolated_node_inside_larger_graph(self):
        weights = np.array([
            [0.0, 0.6, 0.0],
            [0.6, 0.0, 0.0],
            [0.0, 0.0, 0.0],
        ])
        result = textrank(_graph(weights))
        by_id = {item.sentence.id: item.score for item in result.ranking}
        assert by_id["#00_03"] == pytest.approx(0.15, abs=1e-9)
        assert by_id["#00_01"] == pytest.approx(1.0, abs=1e-4)

    def test_asymmetric_fixture_matches_long_oracle(self):
        weights = np.array([
            [0.0, 0.9, 0.1],
            [0.9, 0.0, 0.4],
            [0.1, 0.4, 0.0],
        ])
        result = textrank(_graph(weights))
        oracle = oracle_power_iteration(weights.tolist(), 0.85, 10_000)
        ranked_ids = [item.sentence.id for item in result.ranking]
        oracle_order = sorted(
            range(3), key=lambda i: (-oracle[i], f"#00_{i + 1:02d}")
        )
        assert ranked_ids == [f"#00_{i + 1:02d}" for i in oracle_order]
        by_id = {item.sentence.id: item.score for item in result.ranking}
        for i in range(3):
            assert by_id[f"#00_{i + 1:02d}"] == pytest.approx(oracle[i], abs=1e-3)

    def test_scale_invariance(self):
        weights = np.array([
            [0.0, 0.9, 0.1],
            [0.9, 0.0, 0.4],
            [0.1, 0.4, 0.0],
        ])
        base = textrank(_graph(weights))
        scaled = textrank(_graph(weights * 7.3))
        for a, b in zip(base.ranking, scaled.ranking):
            assert a.sentence.id == b.sentence.id
            assert a.score == pytest.approx(b.score, abs=1e-9)

    def test_scores_within_bounds(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            raw = rng.uniform(0, 1, size=(n, n))
            weights = np.triu(raw, 1)
            weights = weights + weights.T
            weights[weights < 0.3] = 0.0
            result = textrank(_graph(weights, n))
            for item in result.ranking:
                assert 0.15 - 1e-12 <= item.score <= n + 1e-12

    def test_uniformity_limit_small_damping(self):
        weights = np.array([
            [0.0, 0.9, 0.1],
            [0.9, 0.0, 0.4],
            [0.1, 0.4, 0.0],
        ])
        result = textrank(
            _graph(weights),
            TextRankConfig(damping=1e-6, convergence_threshold=1e-12),
        )
        for item in result.ranking:
            assert item.score == pytest.approx(1.0, abs=1e-5)

    def test_non_convergence_flagged(self):
        weights = np.array([
            [0.0, 0.9, 0.0],
            [0.9, 0.0, 0.4],
            [0.0, 0.4, 0.0],
        ])
        result = textrank(_graph(weights), TextRankConfig(max_iterations=1))
        assert not result.converged
        assert result.iterations == 1


class TestRankByCentrality:
    def test_single_sentence(self):
        result = rank_by_centrality(_sentences("only sentence here"))
        assert result.ranking[0].score == pytest.approx(0.15, abs=1e-9)

    def test_permutation_invariance(self):
        texts = [
            "java streams map filter helper",
            "java map collections guide pages",
            "python tuples map notes",
            "java filter chains stream tricks",
            "python list sorting notes",
        ]
        forward = rank_by_centrality(_sentences(*texts))
        # permute input order; ids must stay attached to their texts
        sentences = _sentences(*texts)
        permuted = [sentences[i] for i in (3, 1, 4, 0, 2)]
        backward = rank_by_centrality(permuted)
        assert [s.sentence.id for s in forward.ranking] == [
            s.sentence.id for s in backward.ranking
        ]
        for a, b in zip(forward.ranking, backward.ranking):
            assert a.score == pytest.approx(b.score, abs=1e-12)

    def test_five_sentence_fixture_matches_oracle(self):
        sentences = _sentences(
            "java streams map filter helper",
            "java map collections guide pages",
            "python tuples map notes",
            "java filter chains stream tricks",
            "python list sorting notes",
        )
        graph = build_graph(sentences)
        oracle = oracle_power_iteration(graph.weights.tolist(), 0.85, 10_000)
        result = rank_by_centrality(sentences)
        oracle_order = sorted(
            range(5), key=lambda i: (-oracle[i], sentences[i].id)
        )
        assert [s.sentence.id for s in result.ranking] == [
            sentences[i].id for i in oracle_order
        ]

    def test_converges_quickly_on_fixtures(self):
        sentences = _sentences(
            "java streams map filter helper",
            "java map collections guide pages",
            "python tuples map notes",
        )
        result = rank_by_centrality(sentences)
        assert result.converged
        assert result.iterations <= 200
