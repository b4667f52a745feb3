"""Topic modeling: cluster document embeddings, describe each cluster by its
most characteristic n-grams, and encode any document as a distribution over
the learned topics.

The default clusterer is average-linkage agglomerative clustering over cosine
distance cut at a fixed threshold — deterministic and dependency-light — but
the step is pluggable: pass a callable as ``TopicModelConfig.clustering``.
Clusters smaller than ``min_topic_size`` fall into the outlier pool and emit
no topic.

Term weighting is class-based TF-IDF: each cluster's concatenated documents
count as one class document, and a term scores
``tf(t, c) * log(1 + A / f(t))`` where ``f(t)`` is the term's total frequency
over all documents and ``A`` the average class token count.
"""

from __future__ import annotations

import json
import math
import warnings
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist

from ._text import ngrams, tokenize
from .corpus import Corpus, Document
from .embedding import EmbedderSpec, embed

ARTIFACT_FORMAT = "topicshot/topic-model"
ARTIFACT_VERSION = 1


@dataclass(frozen=True)
class TopicModelConfig:
    """Hyperparameters of the topic modeling step."""

    n_grams_range: tuple[int, int] = (1, 3)
    top_n_words: int = 20
    min_topic_size: int = 10
    clustering: str | Callable[[np.ndarray, "TopicModelConfig"], np.ndarray] = (
        "threshold-agglomerative"
    )
    distance_threshold: float = 0.6
    stopwords: frozenset[str] | None = None
    seed: int = 0
    sharpening: float = 4.0

    def __post_init__(self) -> None:
        lo, hi = self.n_grams_range
        if not 1 <= lo <= hi:
            raise ValueError(f"invalid n_grams_range {self.n_grams_range}")
        if self.top_n_words < 1:
            raise ValueError("top_n_words must be >= 1")
        if self.min_topic_size < 2:
            raise ValueError("min_topic_size must be >= 2")
        if self.distance_threshold <= 0:
            raise ValueError("distance_threshold must be positive")
        if self.sharpening <= 0:
            raise ValueError("sharpening must be positive")
        if self.stopwords is not None and not isinstance(self.stopwords, frozenset):
            object.__setattr__(self, "stopwords", frozenset(self.stopwords))

    def to_dict(self) -> dict:
        if callable(self.clustering):
            raise ValueError(
                "a plugin clusterer is not serializable; fitted models must use a named clustering"
            )
        return {
            "n_grams_range": list(self.n_grams_range),
            "top_n_words": self.top_n_words,
            "min_topic_size": self.min_topic_size,
            "clustering": self.clustering,
            "distance_threshold": self.distance_threshold,
            "stopwords": sorted(self.stopwords) if self.stopwords else None,
            "seed": self.seed,
            "sharpening": self.sharpening,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TopicModelConfig":
        return cls(
            n_grams_range=tuple(data["n_grams_range"]),
            top_n_words=int(data["top_n_words"]),
            min_topic_size=int(data["min_topic_size"]),
            clustering=data["clustering"],
            distance_threshold=float(data["distance_threshold"]),
            stopwords=frozenset(data["stopwords"]) if data.get("stopwords") else None,
            seed=int(data.get("seed", 0)),
            sharpening=float(data.get("sharpening", 4.0)),
        )


@dataclass(frozen=True)
class Topic:
    """A cluster identity: ranked characteristic terms, centroid, member count."""

    index: int
    terms: tuple[tuple[str, float], ...]
    centroid: np.ndarray
    size: int

    def top_terms(self, n: int = 5) -> list[str]:
        return [t for t, _ in self.terms[:n]]


@dataclass(frozen=True)
class TopicDistribution:
    """A document's probability vector over topics; sums to one."""

    weights: np.ndarray
    uniform_fallback: bool = False

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("topic distribution must be a non-empty vector")
        if np.any(w < 0):
            raise ValueError("topic distribution has negative entries")
        if abs(float(w.sum()) - 1.0) > 1e-9:
            raise ValueError(f"topic distribution sums to {w.sum()}, not 1")

    def argmax(self) -> int:
        return int(np.argmax(self.weights))

    def __len__(self) -> int:
        return int(self.weights.size)


def cluster(embeddings: np.ndarray, config: TopicModelConfig) -> np.ndarray:
    """Cluster ids per embedding; -1 marks the outlier pool.

    Clusters with fewer than ``config.min_topic_size`` members are relabeled
    -1; survivors get ids 0..K-1 ordered by size descending (ties broken by
    first member position), so ids are stable for a fixed input.
    """
    X = np.asarray(embeddings, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("need at least one embedding to cluster")
    n = X.shape[0]

    if callable(config.clustering):
        raw = np.asarray(config.clustering(X, config), dtype=int)
        if raw.shape != (n,):
            raise ValueError("plugin clusterer returned a label array of wrong shape")
    elif config.clustering == "threshold-agglomerative":
        if n == 1:
            raw = np.zeros(1, dtype=int)
        else:
            dist = np.clip(pdist(X, metric="cosine"), 0.0, None)
            tree = linkage(dist, method="average")
            raw = fcluster(tree, t=config.distance_threshold, criterion="distance") - 1
    else:
        raise ValueError(f"unknown clustering {config.clustering!r}")

    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(raw):
        if lab >= 0:
            groups.setdefault(int(lab), []).append(i)
    kept = [idx for idx in groups.values() if len(idx) >= config.min_topic_size]
    kept.sort(key=lambda idx: (-len(idx), idx[0]))

    out = np.full(n, -1, dtype=int)
    for new_label, members in enumerate(kept):
        out[np.asarray(members)] = new_label
    return out


def _ngram_counts(docs: Sequence[str], config: TopicModelConfig) -> Counter:
    lo, hi = config.n_grams_range
    counts: Counter = Counter()
    for doc in docs:
        counts.update(ngrams(tokenize(doc, config.stopwords), lo, hi))
    return counts


def extract_topic_terms(
    cluster_docs: Sequence[str],
    all_docs: Sequence[str],
    config: TopicModelConfig,
) -> tuple[tuple[str, float], ...]:
    """Top-q n-grams of a cluster by class-based TF-IDF, weight-descending.

    The cluster is contrasted against the remainder of ``all_docs`` (one
    class each); with the cluster equal to the whole collection the weight
    collapses to a monotone function of raw term frequency.  Ties are broken
    lexicographically.
    """
    if not cluster_docs:
        raise ValueError("cluster has no documents")
    missing = Counter(cluster_docs) - Counter(all_docs)
    if missing:
        raise ValueError("cluster_docs must be a sub-multiset of all_docs")

    cluster_counts = _ngram_counts(cluster_docs, config)
    if not cluster_counts:
        raise ValueError("empty vocabulary after stopword removal")
    all_counts = _ngram_counts(all_docs, config)

    class_totals = [sum(cluster_counts.values())]
    if len(all_docs) > len(cluster_docs):
        class_totals.append(sum(all_counts.values()) - class_totals[0])
    avg_class_size = sum(class_totals) / len(class_totals)

    weighted = [
        (term, tf * math.log(1.0 + avg_class_size / all_counts[term]))
        for term, tf in cluster_counts.items()
    ]
    weighted.sort(key=lambda tw: (-tw[1], tw[0]))
    return tuple(weighted[: config.top_n_words])


class FittedTopicModel:
    """Immutable result of :func:`fit`; safe for concurrent encoding."""

    def __init__(
        self,
        topics: Sequence[Topic],
        config: TopicModelConfig,
        embedder: EmbedderSpec,
        n_documents: int,
        outlier_count: int,
    ):
        self.topics = tuple(topics)
        self.config = config
        self.embedder = embedder
        self.n_documents = n_documents
        self.outlier_count = outlier_count
        self._centroids = np.vstack([t.centroid for t in self.topics])

    @property
    def num_topics(self) -> int:
        return len(self.topics)

    def encode(self, document: Document | str) -> TopicDistribution:
        """Topic distribution of a (possibly unseen) document.

        Similarity to each topic centroid is clamped at zero, sharpened, and
        normalized.  A document resembling no topic gets the uniform
        distribution with ``uniform_fallback`` set.
        """
        if isinstance(document, Document):
            text, doc_id = document.text, document.id
        else:
            text, doc_id = str(document), None
        vec = embed([text], self.embedder, ids=[doc_id] if doc_id is not None else None)[0]
        sims = self._centroids @ vec
        # Similarities within fp noise of zero count as zero, or sharpening
        # would amplify rounding residue into a confident assignment.
        w = np.where(sims > 1e-12, sims, 0.0) ** self.config.sharpening
        total = float(w.sum())
        if total <= 0.0:
            k = self.num_topics
            return TopicDistribution(np.full(k, 1.0 / k), uniform_fallback=True)
        return TopicDistribution(w / total)

    def to_dict(self) -> dict:
        return {
            "format": ARTIFACT_FORMAT,
            "version": ARTIFACT_VERSION,
            "config": self.config.to_dict(),
            "embedder": self.embedder.to_dict(),
            "n_documents": self.n_documents,
            "outlier_count": self.outlier_count,
            "topics": [
                {
                    "index": t.index,
                    "size": t.size,
                    "terms": [[term, w] for term, w in t.terms],
                    "centroid": [float(x) for x in t.centroid],
                }
                for t in self.topics
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FittedTopicModel":
        if data.get("format") != ARTIFACT_FORMAT:
            raise ValueError(f"not a topic model artifact: format={data.get('format')!r}")
        if data.get("version") != ARTIFACT_VERSION:
            raise ValueError(f"unsupported topic model artifact version {data.get('version')!r}")
        topics = [
            Topic(
                index=int(t["index"]),
                terms=tuple((str(term), float(w)) for term, w in t["terms"]),
                centroid=np.asarray(t["centroid"], dtype=float),
                size=int(t["size"]),
            )
            for t in data["topics"]
        ]
        return cls(
            topics=topics,
            config=TopicModelConfig.from_dict(data["config"]),
            embedder=EmbedderSpec.from_dict(data["embedder"]),
            n_documents=int(data["n_documents"]),
            outlier_count=int(data["outlier_count"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def fit(
    corpus: Corpus,
    embeddings: np.ndarray,
    config: TopicModelConfig,
    embedder: EmbedderSpec,
) -> FittedTopicModel:
    """Learn topics from a corpus and its embeddings.

    ``embedder`` records how the embeddings were produced; the fitted model
    reuses it to encode unseen documents.

    Raises:
        ValueError: if the corpus is smaller than ``min_topic_size``, if
            embeddings and corpus disagree in length, or if no cluster
            reaches ``min_topic_size``.
    """
    X = np.asarray(embeddings, dtype=float)
    n = len(corpus)
    if X.shape[0] != n:
        raise ValueError(f"{X.shape[0]} embeddings for {n} documents")
    if n < config.min_topic_size:
        raise ValueError(
            f"corpus too small: {n} documents < min_topic_size {config.min_topic_size}"
        )

    labels = cluster(X, config)
    num_topics = int(labels.max()) + 1 if labels.size else 0
    if num_topics == 0:
        raise ValueError(
            "no cluster reached min_topic_size; raise distance_threshold or lower min_topic_size"
        )
    if num_topics == 1:
        warnings.warn("all documents collapsed into a single topic", stacklevel=2)

    texts = corpus.texts
    topics = []
    for k in range(num_topics):
        members = np.flatnonzero(labels == k)
        centroid = X[members].mean(axis=0)
        norm = np.linalg.norm(centroid)
        if norm == 0.0:
            raise ValueError(f"cluster {k} has a zero centroid; embeddings are degenerate")
        topics.append(
            Topic(
                index=k,
                terms=extract_topic_terms([texts[i] for i in members], texts, config),
                centroid=centroid / norm,
                size=int(members.size),
            )
        )
    return FittedTopicModel(
        topics=topics,
        config=config,
        embedder=embedder,
        n_documents=n,
        outlier_count=int(np.sum(labels == -1)),
    )


def topic_encoder(document: Document | str, model: FittedTopicModel) -> TopicDistribution:
    """Functional alias for :meth:`FittedTopicModel.encode`."""
    return model.encode(document)
