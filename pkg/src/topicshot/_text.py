"""Tokenization helpers shared by the embedder and the term extractor."""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence

_WORD = re.compile(r"\w+", re.UNICODE)


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase Unicode word tokens of ``text``, optionally without stopwords."""
    tokens = _WORD.findall(text.lower())
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return tokens


def ngrams(tokens: Sequence[str], lo: int, hi: int) -> Iterable[str]:
    """All n-grams of ``tokens`` for n in [lo, hi], joined by single spaces."""
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            yield " ".join(tokens[i : i + n])
