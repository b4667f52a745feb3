"""Experiment harness: stratified fold rotations, support-weighted metrics,
wall-clock accounting, and entailment-matrix export.

Four experiment setups cover the train/eval fold combinations:

* ``exp1`` — train on k-1 folds, evaluate on the same k-1 folds (labeling a
  dataset the model has seen, unsupervised).
* ``exp2`` — train on k-1 folds, evaluate on the held-out fold.
* ``exp3`` — train on one fold, evaluate on that same fold.
* ``exp4`` — train on one fold, evaluate on the remaining k-1 folds.

Every rotation of the k folds is run and aggregated as mean and standard
deviation; failed rotations are recorded with their error, never silently
dropped.
"""

from __future__ import annotations

import csv
import time
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Corpus, LabelSet, select_folds, stratified_kfold
from .embedding import EmbedderSpec
from .entailment import EntailmentBackend, HypothesisTemplate
from .topic_model import TopicModelConfig
from .zeroshot import TrainedModel, direct_classify, predict, train

EXPERIMENT_IDS = ("exp1", "exp2", "exp3", "exp4")


@dataclass(frozen=True)
class ClassifierSetup:
    """Everything needed to build and run both classifiers on a corpus."""

    labels: LabelSet
    topic_template: HypothesisTemplate
    document_template: HypothesisTemplate
    tm_config: TopicModelConfig
    embedder: EmbedderSpec
    backend: EntailmentBackend
    baseline_max_tokens: int = 512


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    """Support-weighted precision/recall/F1 with the per-class breakdown."""

    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    per_class: dict[str, ClassMetrics]
    train_time: float = 0.0
    inference_time: float = 0.0

    @property
    def total_time(self) -> float:
        return self.train_time + self.inference_time

    def to_dict(self) -> dict:
        return {
            "weighted_precision": self.weighted_precision,
            "weighted_recall": self.weighted_recall,
            "weighted_f1": self.weighted_f1,
            "per_class": {
                name: {"precision": m.precision, "recall": m.recall, "f1": m.f1, "support": m.support}
                for name, m in self.per_class.items()
            },
            "train_time": self.train_time,
            "inference_time": self.inference_time,
            "total_time": self.total_time,
        }


def weighted_metrics(
    gold: Sequence[str],
    pred: Sequence[str],
    labels: LabelSet,
    train_time: float = 0.0,
    inference_time: float = 0.0,
) -> MetricsReport:
    """Per-class precision/recall/F1 weighted by gold support.

    Empty denominators follow the zero convention: a class that was never
    predicted has precision 0, a class with no gold examples has recall 0,
    and F1 is 0 whenever precision + recall is.
    """
    if len(gold) != len(pred):
        raise ValueError(f"gold has {len(gold)} entries, pred has {len(pred)}")
    if len(gold) == 0:
        raise ValueError("cannot score an empty prediction list")
    known = set(labels)
    for g in gold:
        if g not in known:
            raise ValueError(f"gold label {g!r} outside the label set")
    for p in pred:
        if p not in known:
            raise ValueError(f"prediction {p!r} outside the label set")

    tp = dict.fromkeys(labels, 0)
    fp = dict.fromkeys(labels, 0)
    fn = dict.fromkeys(labels, 0)
    for g, p in zip(gold, pred):
        if g == p:
            tp[g] += 1
        else:
            fp[p] += 1
            fn[g] += 1

    per_class: dict[str, ClassMetrics] = {}
    for name in labels:
        predicted = tp[name] + fp[name]
        support = tp[name] + fn[name]
        precision = tp[name] / predicted if predicted else 0.0
        recall = tp[name] / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[name] = ClassMetrics(precision, recall, f1, support=support)

    total = sum(m.support for m in per_class.values())
    w_p = sum(m.precision * m.support for m in per_class.values()) / total
    w_r = sum(m.recall * m.support for m in per_class.values()) / total
    w_f = sum(m.f1 * m.support for m in per_class.values()) / total
    return MetricsReport(w_p, w_r, w_f, per_class, train_time, inference_time)


@dataclass(frozen=True)
class ExperimentSpec:
    """One of the four fold configurations, with the split parameters."""

    id: str
    k: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.id not in EXPERIMENT_IDS:
            raise ValueError(f"unknown experiment {self.id!r} (expected one of {EXPERIMENT_IDS})")
        if self.k < 2:
            raise ValueError("k must be >= 2")

    def rotation_folds(self, rotation: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(train_folds, eval_folds) for one rotation of the k folds."""
        if not 0 <= rotation < self.k:
            raise ValueError(f"rotation {rotation} outside [0, {self.k})")
        rest = tuple(f for f in range(self.k) if f != rotation)
        one = (rotation,)
        if self.id == "exp1":
            return rest, rest
        if self.id == "exp2":
            return rest, one
        if self.id == "exp3":
            return one, one
        return one, rest


@dataclass(frozen=True)
class RotationResult:
    rotation: int
    train_folds: tuple[int, ...]
    eval_folds: tuple[int, ...]
    metrics: MetricsReport | None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "rotation": self.rotation,
            "train_folds": list(self.train_folds),
            "eval_folds": list(self.eval_folds),
            "metrics": self.metrics.to_dict() if self.metrics else None,
            "error": self.error,
        }


@dataclass(frozen=True)
class ExperimentReport:
    """All rotations of one experiment with mean/std aggregates and times."""

    experiment: str
    k: int
    baseline: bool
    rotations: tuple[RotationResult, ...]
    mean: dict[str, float] = field(default_factory=dict)
    std: dict[str, float] = field(default_factory=dict)
    train_time: float = 0.0
    inference_time: float = 0.0

    @property
    def total_time(self) -> float:
        return self.train_time + self.inference_time

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "k": self.k,
            "baseline": self.baseline,
            "rotations": [r.to_dict() for r in self.rotations],
            "mean": self.mean,
            "std": self.std,
            "train_time": self.train_time,
            "inference_time": self.inference_time,
            "total_time": self.total_time,
        }

    def format_table(self) -> str:
        """Small human-readable summary table."""
        name = "baseline" if self.baseline else "topic pipeline"
        lines = [
            f"{self.experiment} ({name}, k={self.k})",
            f"{'rotation':>8}  {'precision':>9}  {'recall':>9}  {'f1':>9}  {'train s':>8}  {'infer s':>8}",
        ]
        for r in self.rotations:
            if r.metrics is None:
                lines.append(f"{r.rotation:>8}  failed: {r.error}")
                continue
            m = r.metrics
            lines.append(
                f"{r.rotation:>8}  {m.weighted_precision:>9.4f}  {m.weighted_recall:>9.4f}  "
                f"{m.weighted_f1:>9.4f}  {m.train_time:>8.2f}  {m.inference_time:>8.2f}"
            )
        if self.mean:
            lines.append(
                f"{'mean±std':>8}  "
                f"{self.mean['precision']:>9.4f}  {self.mean['recall']:>9.4f}  {self.mean['f1']:>9.4f}"
                f"  ±({self.std['precision']:.4f}/{self.std['recall']:.4f}/{self.std['f1']:.4f})"
            )
        lines.append(
            f"total time: {self.total_time:.2f}s (train {self.train_time:.2f}s + "
            f"inference {self.inference_time:.2f}s)"
        )
        return "\n".join(lines)


def run_experiment(
    spec: ExperimentSpec,
    corpus: Corpus,
    setup: ClassifierSetup,
    baseline: bool = False,
    rotations: Iterable[int] | None = None,
) -> ExperimentReport:
    """Run every fold rotation of one experiment and aggregate.

    The corpus must be fully gold-labeled.  Per rotation the train and eval
    sub-corpora are built from one shared stratified fold plan, the model is
    trained with labels masked (or skipped entirely for the baseline),
    predictions are scored, and wall-clock training and inference times are
    recorded separately.  A failing rotation is recorded with its error and a
    warning, and the remaining rotations still run.
    """
    plan = stratified_kfold(corpus, spec.k, spec.seed)
    chosen = list(rotations) if rotations is not None else list(range(spec.k))

    results: list[RotationResult] = []
    for rotation in chosen:
        train_folds, eval_folds = spec.rotation_folds(rotation)
        train_corpus = select_folds(corpus, plan, train_folds)
        eval_corpus = select_folds(corpus, plan, eval_folds)
        try:
            if baseline:
                train_time = 0.0
                tick = time.perf_counter()
                preds = [
                    direct_classify(
                        d,
                        setup.labels,
                        setup.document_template,
                        setup.backend,
                        setup.baseline_max_tokens,
                    )[0]
                    for d in eval_corpus
                ]
                inference_time = time.perf_counter() - tick
            else:
                tick = time.perf_counter()
                model = train(
                    train_corpus,
                    setup.labels,
                    setup.topic_template,
                    setup.tm_config,
                    setup.backend,
                    setup.embedder,
                )
                train_time = time.perf_counter() - tick
                tick = time.perf_counter()
                preds = [predict(model, d)[0] for d in eval_corpus]
                inference_time = time.perf_counter() - tick
            gold = [d.gold_label for d in eval_corpus]
            report = weighted_metrics(
                gold, preds, setup.labels, train_time=train_time, inference_time=inference_time
            )
            results.append(RotationResult(rotation, train_folds, eval_folds, report))
        except Exception as exc:  # recorded, not silently dropped
            warnings.warn(f"rotation {rotation} of {spec.id} failed: {exc}", stacklevel=2)
            results.append(RotationResult(rotation, train_folds, eval_folds, None, str(exc)))

    scored = [r.metrics for r in results if r.metrics is not None]
    mean: dict[str, float] = {}
    std: dict[str, float] = {}
    if scored:
        for key, attr in (
            ("precision", "weighted_precision"),
            ("recall", "weighted_recall"),
            ("f1", "weighted_f1"),
        ):
            values = np.array([getattr(m, attr) for m in scored])
            mean[key] = float(values.mean())
            std[key] = float(values.std())
    return ExperimentReport(
        experiment=spec.id,
        k=spec.k,
        baseline=baseline,
        rotations=tuple(results),
        mean=mean,
        std=std,
        train_time=sum(m.train_time for m in scored),
        inference_time=sum(m.inference_time for m in scored),
    )


def export_entailment_matrix(
    model: TrainedModel, top_n: int, path: str | Path | None = None
) -> list[list[str]]:
    """Topic-by-label entailment probabilities as CSV rows.

    Rows are the ``min(top_n, K)`` largest topics, size-descending; the first
    column summarizes each topic by its strongest terms, the remaining
    columns are the label names from the table header.  Returns the rows
    (header included) and writes them to ``path`` when given.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    order = sorted(model.topic_model.topics, key=lambda t: (-t.size, t.index))[:top_n]
    header = ["topic"] + list(model.labels)
    rows = [header]
    for topic in order:
        probs = model.entailment_table.probs[topic.index]
        rows.append([" ".join(topic.top_terms(5))] + [repr(float(p)) for p in probs])
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            csv.writer(fh).writerows(rows)
    return rows
