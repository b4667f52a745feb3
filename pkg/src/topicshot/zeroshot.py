"""The zero-shot classifier: unsupervised topic training, compound-probability
prediction, and the direct-entailment baseline.

Training never sees gold labels: it fits a topic model on the corpus, asks
the entailment backend once per topic how strongly the topic's term list
entails each label hypothesis, and stores the resulting topic-by-label
probability table.  Prediction encodes a document as a topic distribution and
mixes the table rows with it:

    theta_j = sum_k  P(topic_k entails hypothesis(label_j)) * omega_k

The label is the argmax of theta, ties broken by lowest label index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus, Document, LabelSet
from .embedding import EmbedderSpec, embed
from .entailment import (
    EntailmentBackend,
    EntailmentTable,
    HypothesisTemplate,
    predict as entailment_predict,
    serialize_topic_premise,
)
from .topic_model import FittedTopicModel, TopicDistribution, TopicModelConfig, fit

MODEL_FORMAT = "topicshot/model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class LabelScores:
    """Per-label probabilities theta for one document."""

    theta: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.theta, dtype=float)
        object.__setattr__(self, "theta", t)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("label scores must be a non-empty vector")
        if np.any(t < -1e-9) or np.any(t > 1 + 1e-9):
            raise ValueError("label scores must lie in [0, 1]")

    def argmax(self) -> int:
        return int(np.argmax(self.theta))

    def tolist(self) -> list[float]:
        return [float(x) for x in self.theta]


class TrainedModel:
    """Everything learned from the corpus: topic model, entailment table,
    label set, and the hypothesis template that produced the table."""

    def __init__(
        self,
        topic_model: FittedTopicModel,
        entailment_table: EntailmentTable,
        labels: LabelSet,
        template: HypothesisTemplate,
    ):
        if entailment_table.probs.shape != (topic_model.num_topics, len(labels)):
            raise ValueError(
                f"entailment table shape {entailment_table.probs.shape} does not match "
                f"({topic_model.num_topics} topics, {len(labels)} labels)"
            )
        self.topic_model = topic_model
        self.entailment_table = entailment_table
        self.labels = labels
        self.template = template

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "topic_model": self.topic_model.to_dict(),
            "entailment_table": self.entailment_table.to_dict(),
            "labels": list(self.labels),
            "template": self.template.pattern,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrainedModel":
        if data.get("format") != MODEL_FORMAT:
            raise ValueError(f"not a model artifact: format={data.get('format')!r}")
        if data.get("version") != MODEL_VERSION:
            raise ValueError(f"unsupported model artifact version {data.get('version')!r}")
        return cls(
            topic_model=FittedTopicModel.from_dict(data["topic_model"]),
            entailment_table=EntailmentTable.from_dict(data["entailment_table"]),
            labels=LabelSet(data["labels"]),
            template=HypothesisTemplate(data["template"]),
        )

    def to_json(self) -> str:
        """Canonical JSON; byte-identical for identical models."""
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TrainedModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def train(
    corpus: Corpus,
    labels: LabelSet,
    template: HypothesisTemplate,
    tm_config: TopicModelConfig,
    backend: EntailmentBackend,
    embedder: EmbedderSpec,
) -> TrainedModel:
    """Unsupervised training: fit topics, then score each topic against the
    label hypotheses once.

    Gold labels are stripped before anything else runs, so the pipeline
    cannot read them even by accident.
    """
    if len(labels) == 0:
        raise ValueError("label set must be non-empty")
    unlabeled = corpus.training_view()

    embeddings = embed(unlabeled.texts, embedder, ids=unlabeled.ids)
    topic_model = fit(unlabeled, embeddings, tm_config, embedder)

    rows = [
        entailment_predict(
            serialize_topic_premise(topic), labels, template, backend, normalize=True
        )
        for topic in topic_model.topics
    ]
    table = EntailmentTable(probs=np.vstack(rows), row_normalized=True)
    return TrainedModel(topic_model, table, labels, template)


def compose_probabilities(
    omega: TopicDistribution | np.ndarray, table: EntailmentTable
) -> LabelScores:
    """theta_j = sum_k table[k][j] * omega_k — exactly the matrix-vector product."""
    w = omega.weights if isinstance(omega, TopicDistribution) else np.asarray(omega, dtype=float)
    if w.ndim != 1 or w.shape[0] != table.num_topics:
        raise ValueError(
            f"topic distribution of length {w.shape} does not match table with "
            f"{table.num_topics} rows"
        )
    return LabelScores(theta=w @ table.probs)


def predict(model: TrainedModel, document: Document | str) -> tuple[str, LabelScores]:
    """Classify one document; ties go to the lowest label index."""
    omega = model.topic_model.encode(document)
    scores = compose_probabilities(omega, model.entailment_table)
    return model.labels[scores.argmax()], scores


def direct_classify(
    document: Document | str,
    labels: LabelSet,
    template: HypothesisTemplate,
    backend: EntailmentBackend,
    max_tokens: int = 512,
) -> tuple[str, LabelScores]:
    """Baseline: entail the (truncated) document text itself against each label.

    The premise is the first ``max_tokens`` whitespace tokens of the document;
    a model runtime behind a remote backend may truncate further at its own
    context limit.
    """
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    text = document.text if isinstance(document, Document) else str(document)
    premise = " ".join(text.split()[:max_tokens])
    scores = LabelScores(
        theta=entailment_predict(premise, labels, template, backend, normalize=True)
    )
    return labels[scores.argmax()], scores
