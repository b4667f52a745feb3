"""Command-line workflows: train, predict, evaluate, export-matrix."""

import json

import pytest
import yaml

from topicshot.cli import ENDPOINT_ENV, load_run_config, main
from topicshot.datasets import make_topic_corpus


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Corpus JSONL, oracle lexicon, and a run config on disk."""
    root = tmp_path_factory.mktemp("cli")
    corpus, labels, lexicon = make_topic_corpus(n_per_class=40, seed=5)

    corpus_path = root / "corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for d in corpus:
            fh.write(json.dumps({"id": d.id, "text": d.text, "label": d.gold_label}) + "\n")

    lexicon_path = root / "lexicon.json"
    lexicon_path.write_text(json.dumps(lexicon), encoding="utf-8")

    config_path = root / "run.yaml"
    config_path.write_text(
        yaml.safe_dump(
            {
                "seed": 11,
                "k": 5,
                "corpus": {"path": str(corpus_path), "format": "jsonl", "text_fields": ["text"]},
                "labels": list(labels),
                "embedder": {"kind": "hashing", "dim": 256},
                "topic_model": {"min_topic_size": 10, "distance_threshold": 0.6},
                "entailment": {"kind": "lexical", "lexicon": str(lexicon_path)},
                "baseline": {"max_tokens": 16},
            }
        ),
        encoding="utf-8",
    )
    return root, config_path, corpus_path


class TestTrainCommand:
    def test_trains_and_writes_artifact(self, workspace, capsys):
        root, config_path, _ = workspace
        model_path = root / "model.json"
        rc = main(["train", "--config", str(config_path), "--model-out", str(model_path)])
        assert rc == 0
        assert model_path.exists()
        out = capsys.readouterr().out
        assert "3 topics" in out
        artifact = json.loads(model_path.read_text())
        assert artifact["format"] == "topicshot/model"

    def test_rerun_is_byte_identical(self, workspace):
        root, config_path, _ = workspace
        p1, p2 = root / "m1.json", root / "m2.json"
        assert main(["train", "--config", str(config_path), "--model-out", str(p1)]) == 0
        assert main(["train", "--config", str(config_path), "--model-out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_missing_corpus_path_fails_with_name(self, workspace, capsys):
        _, config_path, _ = workspace
        rc = main(
            ["train", "--config", str(config_path), "--corpus", "/nowhere/missing.jsonl"]
        )
        assert rc == 1
        assert "/nowhere/missing.jsonl" in capsys.readouterr().err

    def test_seed_mandatory(self, workspace, tmp_path, capsys):
        root, config_path, _ = workspace
        raw = yaml.safe_load(config_path.read_text())
        del raw["seed"]
        stripped = tmp_path / "noseed.yaml"
        stripped.write_text(yaml.safe_dump(raw), encoding="utf-8")
        rc = main(["train", "--config", str(stripped)])
        assert rc == 1
        assert "seed" in capsys.readouterr().err


@pytest.fixture(scope="module")
def model_path(workspace, tmp_path_factory):
    _, config_path, _ = workspace
    path = tmp_path_factory.mktemp("model") / "model.json"
    assert main(["train", "--config", str(config_path), "--model-out", str(path)]) == 0
    return path


class TestPredictCommand:
    def test_predictions_schema(self, workspace, model_path, tmp_path):
        _, _, corpus_path = workspace
        out = tmp_path / "preds.jsonl"
        rc = main(
            ["predict", "--model", str(model_path), "--input", str(corpus_path), "--output", str(out)]
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 120
        gold_by_id = {}
        with open(corpus_path, encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                gold_by_id[rec["id"]] = rec["label"]
        correct = 0
        for line in lines:
            rec = json.loads(line)
            assert set(rec) == {"id", "label", "theta"}
            assert sum(rec["theta"]) == pytest.approx(1.0, abs=1e-9)
            correct += rec["label"] == gold_by_id[rec["id"]]
        assert correct / len(lines) >= 0.95

    def test_empty_input_empty_output(self, model_path, tmp_path):
        src = tmp_path / "empty.jsonl"
        src.write_text("")
        out = tmp_path / "out.jsonl"
        rc = main(["predict", "--model", str(model_path), "--input", str(src), "--output", str(out)])
        assert rc == 0
        assert out.read_text() == ""

    def test_bad_artifact_schema(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"format": "other/thing"}))
        rc = main(["predict", "--model", str(bad), "--input", str(bad), "--output", str(tmp_path / "o")])
        assert rc == 1
        assert "artifact" in capsys.readouterr().err


class TestEvaluateCommand:
    def test_exp1_report(self, workspace, tmp_path, capsys):
        _, config_path, _ = workspace
        report_path = tmp_path / "report.json"
        rc = main(
            [
                "evaluate",
                "--config",
                str(config_path),
                "--experiment",
                "exp1",
                "--single-rotation",
                "--report-out",
                str(report_path),
            ]
        )
        assert rc == 0
        report = json.loads(report_path.read_text())
        assert report["experiment"] == "exp1"
        assert report["mean"]["f1"] >= 0.95
        assert "exp1" in capsys.readouterr().out

    def test_baseline_zero_train_time(self, workspace, tmp_path):
        _, config_path, _ = workspace
        report_path = tmp_path / "report.json"
        rc = main(
            [
                "evaluate",
                "--config",
                str(config_path),
                "--experiment",
                "exp1",
                "--baseline",
                "--single-rotation",
                "--report-out",
                str(report_path),
            ]
        )
        assert rc == 0
        report = json.loads(report_path.read_text())
        assert report["train_time"] == 0.0
        assert report["total_time"] == report["inference_time"]

    def test_unknown_experiment_exits_nonzero(self, workspace):
        _, config_path, _ = workspace
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "--config", str(config_path), "--experiment", "exp9"])
        assert exc.value.code != 0


class TestExportMatrixCommand:
    def test_writes_csv(self, workspace, tmp_path):
        root, config_path, _ = workspace
        model_path = tmp_path / "model.json"
        assert main(["train", "--config", str(config_path), "--model-out", str(model_path)]) == 0
        out = tmp_path / "matrix.csv"
        rc = main(["export-matrix", "--model", str(model_path), "--top-n", "50", "--output", str(out)])
        assert rc == 0
        header = out.read_text().splitlines()[0]
        assert header.startswith("topic,")


class TestRunConfig:
    def test_flags_override_config(self, workspace):
        _, config_path, _ = workspace

        class Args:
            config = str(config_path)
            seed = 99
            k = 3
            corpus = None
            format = None
            text_fields = None
            labels = None
            backend = None
            lexicon = None
            endpoint = None
            embedder_kind = None
            dim = None
            min_topic_size = None
            distance_threshold = None
            max_tokens = None

        cfg = load_run_config(str(config_path), Args())
        assert cfg.seed == 99
        assert cfg.k == 3

    def test_env_var_endpoint_override(self, workspace, monkeypatch):
        _, config_path, _ = workspace
        monkeypatch.setenv(ENDPOINT_ENV, "http://sidecar:9009")

        class Args:
            config = str(config_path)
            seed = None
            k = None
            corpus = None
            format = None
            text_fields = None
            labels = None
            backend = "remote"
            lexicon = None
            endpoint = None
            embedder_kind = None
            dim = None
            min_topic_size = None
            distance_threshold = None
            max_tokens = None

        cfg = load_run_config(str(config_path), Args())
        assert cfg.endpoint == "http://sidecar:9009"
        assert type(cfg.backend()).__name__ == "RemoteBackend"

    def test_missing_config_file(self):
        class Args:
            pass

        with pytest.raises(FileNotFoundError, match="nope.yaml"):
            load_run_config("nope.yaml", Args())
