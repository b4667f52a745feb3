"""Weighted metrics, the four fold experiments, and matrix export."""

import csv

import numpy as np
import pytest

from topicshot import (
    Corpus,
    Document,
    ExperimentSpec,
    LabelSet,
    export_entailment_matrix,
    run_experiment,
    weighted_metrics,
)
from topicshot.datasets import make_topic_corpus


def metrics_by_confusion_matrix(gold, pred, labels):
    """Independent oracle: build the full confusion matrix, derive metrics."""
    names = list(labels)
    index = {name: i for i, name in enumerate(names)}
    m = len(names)
    cm = np.zeros((m, m), dtype=int)
    for g, p in zip(gold, pred):
        cm[index[g], index[p]] += 1
    support = cm.sum(axis=1)
    predicted = cm.sum(axis=0)
    tp = np.diag(cm).astype(float)
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(predicted > 0, tp / predicted, 0.0)
        recall = np.where(support > 0, tp / support, 0.0)
        denom = precision + recall
        f1 = np.where(denom > 0, 2 * precision * recall / denom, 0.0)
    total = support.sum()
    return (
        float((precision * support).sum() / total),
        float((recall * support).sum() / total),
        float((f1 * support).sum() / total),
    )


class TestWeightedMetrics:
    LABELS = LabelSet(["A", "B"])

    def test_hand_worked_case(self):
        rep = weighted_metrics(["A", "A", "B", "B"], ["A", "B", "B", "B"], self.LABELS)
        assert rep.per_class["A"].f1 == pytest.approx(2 / 3, abs=1e-12)
        assert rep.per_class["B"].f1 == pytest.approx(4 / 5, abs=1e-12)
        assert rep.weighted_f1 == pytest.approx(11 / 15, abs=1e-9)
        assert rep.weighted_f1 == pytest.approx(0.7333, abs=1e-4)

    def test_perfect_prediction(self):
        rep = weighted_metrics(["A", "B", "A"], ["A", "B", "A"], self.LABELS)
        assert rep.weighted_precision == rep.weighted_recall == rep.weighted_f1 == 1.0

    def test_never_predicted_class_zero_convention(self):
        rep = weighted_metrics(["A", "B"], ["A", "A"], self.LABELS)
        assert rep.per_class["B"].precision == 0.0
        assert rep.per_class["B"].recall == 0.0
        assert rep.per_class["B"].f1 == 0.0

    def test_weighted_equals_support_average(self):
        rep = weighted_metrics(["A", "A", "B"], ["B", "A", "B"], self.LABELS)
        manual = (2 * rep.per_class["A"].f1 + 1 * rep.per_class["B"].f1) / 3
        assert rep.weighted_f1 == pytest.approx(manual, abs=1e-12)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="entries"):
            weighted_metrics(["A"], ["A", "B"], self.LABELS)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            weighted_metrics([], [], self.LABELS)

    def test_unknown_prediction_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            weighted_metrics(["A"], ["C"], self.LABELS)

    def test_unknown_gold_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            weighted_metrics(["C"], ["A"], self.LABELS)

    def test_matches_confusion_matrix_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            m = int(rng.integers(2, 13))
            n = int(rng.integers(1, 120))
            labels = LabelSet([f"c{j}" for j in range(m)])
            names = list(labels)
            gold = [names[i] for i in rng.integers(0, m, size=n)]
            pred = [names[i] for i in rng.integers(0, m, size=n)]
            if not set(gold):  # pragma: no cover - n >= 1 guarantees non-empty
                continue
            rep = weighted_metrics(gold, pred, labels)
            op, orr, of1 = metrics_by_confusion_matrix(gold, pred, labels)
            assert rep.weighted_precision == pytest.approx(op, abs=1e-12)
            assert rep.weighted_recall == pytest.approx(orr, abs=1e-12)
            assert rep.weighted_f1 == pytest.approx(of1, abs=1e-12)


class TestExperimentSpec:
    def test_unknown_id_rejected(self):
        with pytest.raises(ValueError, match="experiment"):
            ExperimentSpec("exp9")

    @pytest.mark.parametrize("exp_id", ["exp1", "exp2", "exp3", "exp4"])
    def test_fold_contracts(self, exp_id):
        spec = ExperimentSpec(exp_id, k=5)
        for r in range(5):
            train_folds, eval_folds = spec.rotation_folds(r)
            if exp_id in ("exp1", "exp3"):
                assert set(train_folds) == set(eval_folds)
            else:
                assert not set(train_folds) & set(eval_folds)
            if exp_id in ("exp1", "exp2"):
                assert len(train_folds) == 4
            else:
                assert train_folds == (r,)
            if exp_id in ("exp1", "exp4"):
                assert len(eval_folds) == 4
            else:
                assert eval_folds == (r,)

    def test_rotation_range_checked(self):
        with pytest.raises(ValueError, match="rotation"):
            ExperimentSpec("exp1", k=3).rotation_folds(3)


class TestRunExperiment:
    def test_exp1_on_separable_fixture(self, synthetic, classifier_setup):
        corpus, _, _ = synthetic
        report = run_experiment(
            ExperimentSpec("exp1", k=5, seed=11), corpus, classifier_setup, rotations=[0]
        )
        assert len(report.rotations) == 1
        rot = report.rotations[0]
        assert rot.error is None
        assert rot.metrics.weighted_f1 >= 0.95
        assert set(rot.train_folds) == set(rot.eval_folds)
        assert report.mean["f1"] >= 0.95

    def test_exp2_disjoint_unseen_data(self, synthetic, classifier_setup):
        corpus, _, _ = synthetic
        report = run_experiment(
            ExperimentSpec("exp2", k=5, seed=11), corpus, classifier_setup, rotations=[1]
        )
        rot = report.rotations[0]
        assert not set(rot.train_folds) & set(rot.eval_folds)
        assert rot.metrics is not None

    def test_baseline_has_zero_train_time(self, synthetic, classifier_setup):
        corpus, _, _ = synthetic
        report = run_experiment(
            ExperimentSpec("exp1", k=5, seed=11),
            corpus,
            classifier_setup,
            baseline=True,
            rotations=[0],
        )
        assert report.train_time == 0.0
        assert report.rotations[0].metrics.train_time == 0.0
        assert report.rotations[0].metrics.inference_time > 0.0
        assert report.total_time == report.inference_time

    def test_total_time_accounting(self, synthetic, classifier_setup):
        corpus, _, _ = synthetic
        report = run_experiment(
            ExperimentSpec("exp3", k=5, seed=11), corpus, classifier_setup, rotations=[0]
        )
        m = report.rotations[0].metrics
        assert m.total_time == pytest.approx(m.train_time + m.inference_time, abs=1e-12)
        assert report.total_time == pytest.approx(report.train_time + report.inference_time, abs=1e-12)
        assert report.train_time > 0.0

    def test_failed_rotations_recorded_not_dropped(self, classifier_setup):
        # 30 documents over 5 folds: exp3 trains on 6 < min_topic_size docs.
        corpus, labels, lexicon = make_topic_corpus(n_per_class=10, seed=3)
        with pytest.warns(UserWarning, match="failed"):
            report = run_experiment(
                ExperimentSpec("exp3", k=5, seed=2), corpus, classifier_setup
            )
        assert len(report.rotations) == 5
        assert all(r.error is not None for r in report.rotations)
        assert all(r.metrics is None for r in report.rotations)
        assert report.mean == {}

    def test_unlabeled_corpus_rejected(self, classifier_setup):
        corpus = Corpus([Document("a", "x"), Document("b", "y")])
        with pytest.raises(ValueError, match="gold label"):
            run_experiment(ExperimentSpec("exp1", k=2, seed=0), corpus, classifier_setup)

    def test_report_dict_shape(self, synthetic, classifier_setup):
        corpus, _, _ = synthetic
        report = run_experiment(
            ExperimentSpec("exp1", k=5, seed=11), corpus, classifier_setup, rotations=[0]
        )
        data = report.to_dict()
        assert data["experiment"] == "exp1"
        assert len(data["rotations"]) == 1
        assert 0 <= data["mean"]["f1"] <= 1
        assert data["total_time"] == pytest.approx(data["train_time"] + data["inference_time"])
        assert "f1" in data["std"]


class TestExportMatrix:
    def test_rows_sorted_by_size_and_clamped(self, trained_model):
        rows = export_entailment_matrix(trained_model, top_n=50)
        k = trained_model.topic_model.num_topics
        assert len(rows) == 1 + min(50, k)
        assert rows[0] == ["topic"] + list(trained_model.labels)
        sizes = sorted((t.size for t in trained_model.topic_model.topics), reverse=True)
        assert sizes == sorted(sizes, reverse=True)

    def test_top_n_smaller_than_k(self, trained_model):
        rows = export_entailment_matrix(trained_model, top_n=2)
        assert len(rows) == 3

    def test_cells_in_unit_interval(self, trained_model):
        rows = export_entailment_matrix(trained_model, top_n=50)
        for row in rows[1:]:
            for cell in row[1:]:
                assert 0.0 <= float(cell) <= 1.0

    def test_csv_file_written(self, trained_model, tmp_path):
        out = tmp_path / "matrix.csv"
        export_entailment_matrix(trained_model, top_n=50, path=out)
        with open(out, newline="", encoding="utf-8") as fh:
            parsed = list(csv.reader(fh))
        assert parsed[0][1:] == list(trained_model.labels)
        assert len(parsed) == 1 + trained_model.topic_model.num_topics

    def test_top_n_floor(self, trained_model):
        with pytest.raises(ValueError, match="top_n"):
            export_entailment_matrix(trained_model, top_n=0)
