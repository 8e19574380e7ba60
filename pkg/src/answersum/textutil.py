"""Shared tokenizers.

Two tokenizations are used across the package and must stay consistent:

* :func:`tokenize` is the code-aware tokenizer used by the lexical scorer,
  the TF-IDF embedder, and the sentence-graph edge weights.  It lowercases
  plain words, splits on non-alphanumeric characters, and keeps backticked
  inline-code spans intact as single case-sensitive tokens.
* :func:`rouge_tokenize` is the plain tokenizer used for ROUGE: lowercase,
  split on non-alphanumerics, no stemming, no stopword removal.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"`([^`]+)`|([A-Za-z0-9]+)")
_PLAIN_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Tokenize ``text``, keeping ```code``` spans as single tokens."""
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        code, word = match.group(1), match.group(2)
        if code is not None:
            tokens.append(code)
        else:
            tokens.append(word.lower())
    return tokens


def rouge_tokenize(text: str) -> list[str]:
    """Tokenize ``text`` for ROUGE scoring."""
    return _PLAIN_TOKEN_RE.findall(text.lower())
