"""Deterministic hashing vocabulary and input encoding.

Tokens map to fixed ids via CRC32, so no vocabulary file is needed and the
mapping is stable across processes and platforms.  Classifier inputs
follow the ``[CLS] query [SEP] sentence [SEP]`` layout padded to a fixed
length.
"""

from __future__ import annotations

import re
import zlib

import torch

PAD_ID = 0
CLS_ID = 1
SEP_ID = 2
_RESERVED = 3

_TOKEN_RE = re.compile(r"[a-z0-9]+")

DEFAULT_VOCAB_SIZE = 30_000
PAIR_MAX_LEN = 512
SENTENCE_MAX_LEN = 64


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def token_id(token: str, vocab_size: int) -> int:
    return _RESERVED + zlib.crc32(token.encode("utf-8")) % (vocab_size - _RESERVED)


def encode_pair(
    query: str, sentence: str, vocab_size: int, max_len: int = PAIR_MAX_LEN
) -> list[int]:
    """``[CLS] query [SEP] sentence [SEP]`` padded/truncated to ``max_len``."""
    ids = [CLS_ID]
    ids += [token_id(t, vocab_size) for t in tokenize(query)]
    ids.append(SEP_ID)
    ids += [token_id(t, vocab_size) for t in tokenize(sentence)]
    ids = ids[: max_len - 1]
    ids.append(SEP_ID)
    ids += [PAD_ID] * (max_len - len(ids))
    return ids


def encode_sentence(
    sentence: str, vocab_size: int, max_len: int = SENTENCE_MAX_LEN
) -> list[int]:
    ids = [CLS_ID] + [token_id(t, vocab_size) for t in tokenize(sentence)]
    ids = ids[:max_len]
    ids += [PAD_ID] * (max_len - len(ids))
    return ids


def batch_pairs(
    query: str, sentences: list[str], vocab_size: int,
    max_len: int = PAIR_MAX_LEN,
) -> torch.Tensor:
    return torch.tensor(
        [encode_pair(query, s, vocab_size, max_len) for s in sentences],
        dtype=torch.long,
    )


def batch_sentences(
    sentences: list[str], vocab_size: int, max_len: int = SENTENCE_MAX_LEN
) -> torch.Tensor:
    return torch.tensor(
        [encode_sentence(s, vocab_size, max_len) for s in sentences],
        dtype=torch.long,
    )
