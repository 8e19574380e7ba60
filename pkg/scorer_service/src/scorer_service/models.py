"""The two desk-scale models behind the wire protocol.

``UsefulnessClassifier`` encodes ``[CLS] query [SEP] sentence [SEP]``
pairs with a small transformer encoder and maps the [CLS] vector through
a single linear layer and a sigmoid to the positive-class probability.
``ContrastiveEmbedder`` produces fixed-dimension sentence vectors from a
masked mean of token embeddings followed by a projection; it is trained
with the in-batch contrastive objective in :mod:`scorer_service.training`.

Artifacts are directories holding ``model.pt`` plus a ``manifest.json``
describing shape, seed, data size, and hyperparameters.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from torch import nn

from . import vocab


class UsefulnessClassifier(nn.Module):
    def __init__(self, vocab_size: int = vocab.DEFAULT_VOCAB_SIZE,
                 d_model: int = 32, n_heads: int = 2, n_layers: int = 1,
                 max_len: int = vocab.PAIR_MAX_LEN):
        super().__init__()
        self.vocab_size = vocab_size
        self.max_len = max_len
        self.embedding = nn.Embedding(vocab_size, d_model,
                                      padding_idx=vocab.PAD_ID)
        self.position = nn.Embedding(max_len, d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=d_model, nhead=n_heads, dim_feedforward=4 * d_model,
            batch_first=True, dropout=0.1,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=n_layers,
                                             enable_nested_tensor=False)
        self.head = nn.Linear(d_model, 1)
        self._hyper = {
            "vocab_size": vocab_size, "d_model": d_model, "n_heads": n_heads,
            "n_layers": n_layers, "max_len": max_len,
        }

    def forward(self, token_ids: torch.Tensor) -> torch.Tensor:
        """Positive-class probabilities for a batch of encoded pairs."""
        positions = torch.arange(token_ids.shape[1], device=token_ids.device)
        hidden = self.embedding(token_ids) + self.position(positions)
        padding_mask = token_ids == vocab.PAD_ID
        encoded = self.encoder(hidden, src_key_padding_mask=padding_mask)
        return torch.sigmoid(self.head(encoded[:, 0, :])).squeeze(-1)

    @torch.no_grad()
    def score(self, query: str, sentences: list[str]) -> list[float]:
        self.eval()
        if not sentences:
            return []
        batch = vocab.batch_pairs(query, sentences, self.vocab_size,
                                  self.max_len)
        probs = self(batch)
        return [float(min(1.0, max(0.0, p))) for p in probs.tolist()]


class ContrastiveEmbedder(nn.Module):
    def __init__(self, vocab_size: int = vocab.DEFAULT_VOCAB_SIZE,
                 d_model: int = 64, dim: int = 64,
                 max_len: int = vocab.SENTENCE_MAX_LEN):
        super().__init__()
        self.vocab_size = vocab_size
        self.dim = dim
        self.max_len = max_len
        self.embedding = nn.Embedding(vocab_size, d_model,
                                      padding_idx=vocab.PAD_ID)
        self.projection = nn.Linear(d_model, dim)
        self._hyper = {
            "vocab_size": vocab_size, "d_model": d_model, "dim": dim,
            "max_len": max_len,
        }

    def forward(self, token_ids: torch.Tensor) -> torch.Tensor:
        mask = (token_ids != vocab.PAD_ID).float().unsqueeze(-1)
        summed = (self.embedding(token_ids) * mask).sum(dim=1)
        counts = mask.sum(dim=1).clamp(min=1.0)
        return self.projection(summed / counts)

    def encode_batch(self, sentences: list[str]) -> torch.Tensor:
        batch = vocab.batch_sentences(sentences, self.vocab_size, self.max_len)
        return self(batch)

    @torch.no_grad()
    def encode(self, sentences: list[str]) -> list[list[float]]:
        self.eval()
        if not sentences:
            return []
        return [[float(x) for x in row] for row in self.encode_batch(sentences).tolist()]


def save_artifact(model: nn.Module, path: str | Path, manifest: dict) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), path / "model.pt")
    payload = {
        "kind": type(model).__name__,
        "hyper": model._hyper,
        **manifest,
    }
    (path / "manifest.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_artifact(path: str | Path) -> tuple[nn.Module, dict]:
    path = Path(path)
    manifest = json.loads((path / "manifest.json").read_text(encoding="utf-8"))
    kinds = {
        "UsefulnessClassifier": UsefulnessClassifier,
        "ContrastiveEmbedder": ContrastiveEmbedder,
    }
    model = kinds[manifest["kind"]](**manifest["hyper"])
    model.load_state_dict(torch.load(path / "model.pt", weights_only=True))
    model.eval()
    return model, manifest
