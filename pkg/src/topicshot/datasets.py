"""Synthetic corpora with controllable class separation.

Documents are built from disjoint per-class vocabularies plus a shared filler
vocabulary: a filler-only prefix followed by a class-specific body.  The
construction gives three levers that tests and demos rely on:

* embeddings of same-class documents are far more similar than cross-class
  ones, so threshold clustering recovers the classes;
* the class signal sits entirely in the suffix, so a classifier that
  truncates early inputs loses it;
* the returned lexicon maps every class word to its label, which makes the
  lexical entailment backend an exact oracle for the construction.
"""

from __future__ import annotations

import random

from .corpus import Corpus, Document, LabelSet

_CONSONANTS = "bcdfglmnprstvz"
_VOWELS = "aeiou"


def _pseudo_word(rng: random.Random) -> str:
    return "".join(
        rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(rng.randint(2, 4))
    )


def _fresh_words(rng: random.Random, count: int, taken: set[str]) -> list[str]:
    words = []
    while len(words) < count:
        w = _pseudo_word(rng)
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def make_topic_corpus(
    n_per_class: int = 100,
    seed: int = 7,
    labels: tuple[str, ...] = ("esporte", "mercado", "ciencia"),
    class_vocab_size: int = 30,
    filler_vocab_size: int = 20,
    prefix_len: int = 16,
    body_len: int = 64,
) -> tuple[Corpus, LabelSet, dict[str, str]]:
    """A labeled synthetic corpus, its label set, and a word-to-label lexicon.

    Every document is ``prefix_len`` shared filler words followed by
    ``body_len`` words drawn from its class vocabulary.  Deterministic for a
    fixed seed.
    """
    rng = random.Random(seed)
    taken: set[str] = set()
    filler = _fresh_words(rng, filler_vocab_size, taken)
    class_vocab = {label: _fresh_words(rng, class_vocab_size, taken) for label in labels}

    docs = []
    for label in labels:
        for i in range(n_per_class):
            prefix = rng.choices(filler, k=prefix_len)
            body = rng.choices(class_vocab[label], k=body_len)
            docs.append(
                Document(id=f"{label}-{i:03d}", text=" ".join(prefix + body), gold_label=label)
            )
    rng.shuffle(docs)

    lexicon = {w: label for label, words in class_vocab.items() for w in words}
    return Corpus(docs), LabelSet(labels), lexicon
