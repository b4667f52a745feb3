"""Hypothesis templating and entailment probability backends.

A backend answers one question: given a premise and a list of hypothesis
sentences, how strongly does the premise entail each?  Two implementations:

* :class:`LexicalBackend` — a deterministic oracle that counts premise tokens
  mapped to each label by a user-supplied lexicon, with additive smoothing.
  CI-runnable, no models; validates the pipeline end to end.
* :class:`RemoteBackend` — POSTs to an inference service's ``/entail``
  endpoint, batching all hypotheses for one premise in a single request.
"""

from __future__ import annotations

import json
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from ._http import ContractViolationError, post_json
from ._text import tokenize
from .corpus import LabelSet
from .topic_model import Topic

DOCUMENT_TEMPLATE = "O tema principal desta notícia é {}"
TOPIC_TEMPLATE = "O tema principal desta lista de palavras é {}"


@dataclass(frozen=True)
class HypothesisTemplate:
    """A sentence pattern with exactly one ``{}`` slot for a label name."""

    pattern: str

    def __post_init__(self) -> None:
        if self.pattern.count("{}") != 1:
            raise ValueError(
                f"template must contain exactly one '{{}}' placeholder: {self.pattern!r}"
            )

    def render(self, label: str) -> str:
        return self.pattern.replace("{}", label)


def render_hypotheses(template: HypothesisTemplate, labels: LabelSet) -> list[str]:
    """One hypothesis sentence per label, in label order."""
    return [template.render(label) for label in labels]


@dataclass(frozen=True)
class EntailmentTable:
    """Matrix of P(topic k entails hypothesis(label j)), shape K x m."""

    probs: np.ndarray
    row_normalized: bool = True

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != 2:
            raise ValueError("entailment table must be a 2-D matrix")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise ValueError("entailment probabilities must lie in [0, 1]")
        if self.row_normalized:
            sums = p.sum(axis=1)
            if np.any(np.abs(sums - 1.0) > 1e-9):
                raise ValueError("row-normalized table has rows not summing to 1")

    @property
    def num_topics(self) -> int:
        return int(self.probs.shape[0])

    @property
    def num_labels(self) -> int:
        return int(self.probs.shape[1])

    def to_dict(self) -> dict:
        return {
            "probs": [[float(x) for x in row] for row in self.probs],
            "row_normalized": self.row_normalized,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EntailmentTable":
        return cls(
            probs=np.asarray(data["probs"], dtype=float),
            row_normalized=bool(data["row_normalized"]),
        )


@runtime_checkable
class EntailmentBackend(Protocol):
    def entail(
        self, premise: str, hypotheses: Sequence[str], normalize: bool = True
    ) -> np.ndarray: ...


class LexicalBackend:
    """Deterministic entailment oracle driven by a term-to-label lexicon.

    score(label) = epsilon + number of premise tokens the lexicon maps to that
    label, normalized over labels.  With no lexicon hits the scores collapse
    to the uniform distribution.  Hypothesis sentences are matched to labels
    by containment of the label name, so the same lexicon serves any
    template.
    """

    def __init__(self, lexicon: dict[str, str], labels: LabelSet, epsilon: float = 0.01):
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.lexicon = {k.lower(): v for k, v in lexicon.items()}
        self.labels = labels
        self.epsilon = epsilon
        unknown = sorted(set(self.lexicon.values()) - set(labels))
        if unknown:
            raise ValueError(f"lexicon maps to labels outside the label set: {unknown}")

    @classmethod
    def from_file(cls, path: str | Path, labels: LabelSet, epsilon: float = 0.01) -> "LexicalBackend":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh), labels, epsilon)

    def _label_of(self, hypothesis: str) -> str:
        # Longest label name contained in the hypothesis wins, so labels that
        # are substrings of one another resolve correctly.
        best = None
        for label in self.labels:
            if label in hypothesis and (best is None or len(label) > len(best)):
                best = label
        if best is None:
            raise ValueError(f"hypothesis {hypothesis!r} names no known label")
        return best

    def entail(
        self, premise: str, hypotheses: Sequence[str], normalize: bool = True
    ) -> np.ndarray:
        if not premise.strip():
            raise ValueError("premise must be non-empty")
        counts: dict[str, int] = {label: 0 for label in self.labels}
        for token in tokenize(premise):
            label = self.lexicon.get(token)
            if label is not None:
                counts[label] += 1
        scores = np.array(
            [self.epsilon + counts[self._label_of(h)] for h in hypotheses], dtype=float
        )
        # The smoothed scores always compete across labels; the raw mode is
        # identical because the floor keeps every entry positive.
        return scores / scores.sum()


class RemoteBackend:
    """Entailment via the sidecar's ``/entail`` endpoint.

    All hypotheses for one premise travel in a single request.  Transport
    errors are retried with exponential backoff; contract violations are not.
    """

    def __init__(
        self,
        endpoint: str,
        *,
        timeout: float = 60.0,
        retries: int = 3,
        backoff: float = 0.2,
        max_in_flight: int = 4,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._semaphore = threading.Semaphore(max_in_flight)

    def entail(
        self, premise: str, hypotheses: Sequence[str], normalize: bool = True
    ) -> np.ndarray:
        if not premise.strip():
            raise ValueError("premise must be non-empty")
        body = post_json(
            f"{self.endpoint}/entail",
            {"premise": premise, "hypotheses": list(hypotheses), "normalize": normalize},
            timeout=self.timeout,
            retries=self.retries,
            backoff=self.backoff,
            semaphore=self._semaphore,
        )
        probs = body.get("probs")
        if not isinstance(probs, list) or len(probs) != len(hypotheses):
            raise ContractViolationError(
                f"entail service returned {0 if not isinstance(probs, list) else len(probs)} "
                f"probabilities for {len(hypotheses)} hypotheses"
            )
        arr = np.asarray(probs, dtype=float)
        if np.any(arr < 0) or np.any(arr > 1) or not np.all(np.isfinite(arr)):
            raise ContractViolationError("entail service returned probabilities outside [0, 1]")
        if normalize and abs(float(arr.sum()) - 1.0) > 1e-6:
            raise ContractViolationError(
                f"entail service returned a normalized vector summing to {arr.sum()}"
            )
        return arr


def predict(
    premise: str,
    labels: LabelSet,
    template: HypothesisTemplate,
    backend: EntailmentBackend,
    normalize: bool = True,
) -> np.ndarray:
    """Probability vector over labels for one premise.

    With ``normalize`` the entries compete across labels and sum to exactly
    one; without it they are the backend's raw per-label entailment scores.
    """
    if not premise.strip():
        raise ValueError("premise must be non-empty")
    hypotheses = render_hypotheses(template, labels)
    probs = np.asarray(backend.entail(premise, hypotheses, normalize=normalize), dtype=float)
    if probs.shape != (len(labels),):
        raise ContractViolationError(
            f"backend returned shape {probs.shape}, expected ({len(labels)},)"
        )
    if np.any(probs < 0) or np.any(probs > 1 + 1e-12) or not np.all(np.isfinite(probs)):
        raise ContractViolationError("backend returned values outside [0, 1]")
    if normalize:
        total = float(probs.sum())
        if total <= 0:
            raise ContractViolationError("backend returned an all-zero vector; cannot normalize")
        probs = probs / total
    return probs


def serialize_topic_premise(topic: Topic) -> str:
    """A topic as entailment input: its terms in weight order, comma-joined."""
    if not topic.terms:
        raise ValueError(f"topic {topic.index} has no terms")
    return ", ".join(term for term, _ in topic.terms)
