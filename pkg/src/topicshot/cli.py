"""Command-line entry point: train, predict, evaluate, export-matrix.

Runs are described by a declarative YAML/JSON config file; any flag given on
the command line wins over the file.  The ``TOPICSHOT_ENDPOINT`` environment
variable overrides the inference-service endpoint for remote backends
(flags still win over the environment).

Exit code 0 means success; every diagnostic goes to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import yaml

from .corpus import Corpus, LabelSet, filter_labels, load_corpus
from .embedding import EmbedderSpec
from .entailment import (
    DOCUMENT_TEMPLATE,
    TOPIC_TEMPLATE,
    EntailmentBackend,
    HypothesisTemplate,
    LexicalBackend,
    RemoteBackend,
)
from .evaluation import ClassifierSetup, ExperimentSpec, export_entailment_matrix, run_experiment
from .topic_model import TopicModelConfig
from .zeroshot import TrainedModel, predict, train

ENDPOINT_ENV = "TOPICSHOT_ENDPOINT"


@dataclass
class RunConfig:
    """A fully resolved run description."""

    seed: int
    k: int
    corpus_path: str | None
    corpus_format: str
    text_fields: list[str]
    labels: LabelSet
    document_template: HypothesisTemplate
    topic_template: HypothesisTemplate
    embedder: EmbedderSpec
    tm_config: TopicModelConfig
    entailment_kind: str
    lexicon_path: str | None
    endpoint: str | None
    baseline_max_tokens: int
    outputs: dict[str, str]

    def backend(self) -> EntailmentBackend:
        if self.entailment_kind == "lexical":
            if not self.lexicon_path:
                raise ValueError("lexical entailment backend needs a lexicon path")
            return LexicalBackend.from_file(self.lexicon_path, self.labels)
        if self.entailment_kind == "remote":
            if not self.endpoint:
                raise ValueError(
                    f"remote entailment backend needs an endpoint (flag, config, or ${ENDPOINT_ENV})"
                )
            return RemoteBackend(self.endpoint)
        raise ValueError(f"unknown entailment backend {self.entailment_kind!r}")

    def setup(self) -> ClassifierSetup:
        return ClassifierSetup(
            labels=self.labels,
            topic_template=self.topic_template,
            document_template=self.document_template,
            tm_config=self.tm_config,
            embedder=self.embedder,
            backend=self.backend(),
            baseline_max_tokens=self.baseline_max_tokens,
        )

    def load_corpus(self) -> Corpus:
        if not self.corpus_path:
            raise ValueError("no corpus path configured")
        if not Path(self.corpus_path).exists():
            raise FileNotFoundError(f"corpus file not found: {self.corpus_path}")
        return load_corpus(self.corpus_path, self.corpus_format, self.text_fields)


def load_run_config(path: str | None, args: argparse.Namespace) -> RunConfig:
    """Merge config file, environment, and flags (flags win)."""
    raw: dict = {}
    if path:
        if not Path(path).exists():
            raise FileNotFoundError(f"config file not found: {path}")
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}

    def flag(name, default=None):
        return getattr(args, name, None) if getattr(args, name, None) is not None else default

    corpus_cfg = raw.get("corpus", {})
    tm_cfg = raw.get("topic_model", {})
    emb_cfg = raw.get("embedder", {})
    ent_cfg = raw.get("entailment", {})
    templates = raw.get("templates", {})

    seed = flag("seed", raw.get("seed"))
    if seed is None:
        raise ValueError("seed is mandatory (config 'seed' or --seed)")

    endpoint = (
        flag("endpoint")
        or os.environ.get(ENDPOINT_ENV)
        or ent_cfg.get("endpoint")
        or emb_cfg.get("endpoint")
    )

    labels_raw = flag("labels", raw.get("labels"))
    if not labels_raw:
        raise ValueError("config must list the candidate labels")

    emb_kind = flag("embedder_kind", emb_cfg.get("kind", "hashing"))
    embedder = EmbedderSpec(
        kind=emb_kind,
        dim=int(flag("dim", emb_cfg.get("dim", 256))),
        endpoint=endpoint if emb_kind == "remote" else emb_cfg.get("endpoint"),
        path=emb_cfg.get("path"),
        batch_size=int(emb_cfg.get("batch_size", 64)),
    )
    tm_config = TopicModelConfig(
        n_grams_range=tuple(tm_cfg.get("n_grams_range", (1, 3))),
        top_n_words=int(tm_cfg.get("top_n_words", 20)),
        min_topic_size=int(flag("min_topic_size", tm_cfg.get("min_topic_size", 10))),
        clustering=tm_cfg.get("clustering", "threshold-agglomerative"),
        distance_threshold=float(flag("distance_threshold", tm_cfg.get("distance_threshold", 0.6))),
        stopwords=frozenset(tm_cfg["stopwords"]) if tm_cfg.get("stopwords") else None,
        seed=int(seed),
        sharpening=float(tm_cfg.get("sharpening", 4.0)),
    )
    lexicon_path = flag("lexicon", ent_cfg.get("lexicon"))
    config = RunConfig(
        seed=int(seed),
        k=int(flag("k", raw.get("k", 5))),
        corpus_path=flag("corpus", corpus_cfg.get("path")),
        corpus_format=flag("format", corpus_cfg.get("format", "jsonl")),
        text_fields=list(flag("text_fields", corpus_cfg.get("text_fields", ["text"]))),
        labels=LabelSet(labels_raw),
        document_template=HypothesisTemplate(templates.get("document", DOCUMENT_TEMPLATE)),
        topic_template=HypothesisTemplate(templates.get("topic", TOPIC_TEMPLATE)),
        embedder=embedder,
        tm_config=tm_config,
        entailment_kind=flag("backend", ent_cfg.get("kind", "lexical")),
        lexicon_path=lexicon_path,
        endpoint=endpoint,
        baseline_max_tokens=int(flag("max_tokens", raw.get("baseline", {}).get("max_tokens", 512))),
        outputs=dict(raw.get("output", {})),
    )
    if config.entailment_kind == "lexical" and config.lexicon_path:
        if not Path(config.lexicon_path).exists():
            raise FileNotFoundError(f"lexicon file not found: {config.lexicon_path}")
    return config


def cmd_train(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, args)
    corpus = config.load_corpus()
    model = train(
        corpus,
        config.labels,
        config.topic_template,
        config.tm_config,
        config.backend(),
        config.embedder,
    )
    out = args.model_out or config.outputs.get("model", "model.json")
    model.save(out)
    tm = model.topic_model
    print(f"trained on {len(corpus)} documents -> {tm.num_topics} topics "
          f"({tm.outlier_count} outliers), artifact: {out}")
    for topic in tm.topics:
        print(f"  topic {topic.index} (size {topic.size}): {', '.join(topic.top_terms(5))}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    model = TrainedModel.load(args.model)
    if not Path(args.input).exists():
        raise FileNotFoundError(f"input file not found: {args.input}")
    corpus = load_corpus(args.input, args.format, args.text_fields)
    with open(args.output, "w", encoding="utf-8") as fh:
        for doc in corpus:
            label, scores = predict(model, doc)
            fh.write(
                json.dumps(
                    {"id": doc.id, "label": label, "theta": scores.tolist()},
                    ensure_ascii=False,
                    sort_keys=True,
                    separators=(",", ":"),
                )
                + "\n"
            )
    print(f"wrote {len(corpus)} predictions to {args.output}", file=sys.stderr)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, args)
    corpus = filter_labels(config.load_corpus(), config.labels)
    spec = ExperimentSpec(id=args.experiment, k=config.k, seed=config.seed)
    report = run_experiment(
        spec,
        corpus,
        config.setup(),
        baseline=args.baseline,
        rotations=[0] if args.single_rotation else None,
    )
    out = args.report_out or config.outputs.get("report")
    if out:
        Path(out).write_text(
            json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        print(f"report written to {out}", file=sys.stderr)
    print(report.format_table())
    return 0


def cmd_export_matrix(args: argparse.Namespace) -> int:
    model = TrainedModel.load(args.model)
    rows = export_entailment_matrix(model, args.top_n, args.output)
    print(f"wrote {len(rows) - 1} topic rows to {args.output}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topicshot",
        description="Zero-shot text classification via topic compression and entailment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="YAML/JSON run config")
        p.add_argument("--seed", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--corpus", help="corpus file path")
        p.add_argument("--format", choices=["jsonl", "csv"])
        p.add_argument("--text-fields", dest="text_fields", nargs="+")
        p.add_argument("--labels", nargs="+")
        p.add_argument("--backend", choices=["lexical", "remote"])
        p.add_argument("--lexicon", help="term-to-label lexicon JSON (lexical backend)")
        p.add_argument("--endpoint", help="inference service URL (remote backend)")
        p.add_argument("--embedder-kind", dest="embedder_kind", choices=["hashing", "remote", "precomputed"])
        p.add_argument("--dim", type=int)
        p.add_argument("--min-topic-size", dest="min_topic_size", type=int)
        p.add_argument("--distance-threshold", dest="distance_threshold", type=float)
        p.add_argument("--max-tokens", dest="max_tokens", type=int)

    p_train = sub.add_parser("train", help="fit the topic model and entailment table")
    add_config_flags(p_train)
    p_train.add_argument("--model-out", dest="model_out", help="artifact output path")
    p_train.set_defaults(func=cmd_train)

    p_pred = sub.add_parser("predict", help="classify documents with a trained artifact")
    p_pred.add_argument("--model", required=True, help="trained model artifact")
    p_pred.add_argument("--input", required=True, help="JSONL/CSV documents to classify")
    p_pred.add_argument("--output", required=True, help="JSONL predictions path")
    p_pred.add_argument("--format", default="jsonl", choices=["jsonl", "csv"])
    p_pred.add_argument("--text-fields", dest="text_fields", nargs="+", default=["text"])
    p_pred.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser("evaluate", help="run one of the four fold experiments")
    add_config_flags(p_eval)
    p_eval.add_argument("--experiment", required=True, choices=list(("exp1", "exp2", "exp3", "exp4")))
    p_eval.add_argument("--baseline", action="store_true", help="run the direct-entailment baseline")
    p_eval.add_argument("--single-rotation", action="store_true", help="smoke run: rotation 0 only")
    p_eval.add_argument("--report-out", dest="report_out", help="JSON report path")
    p_eval.set_defaults(func=cmd_evaluate)

    p_mat = sub.add_parser("export-matrix", help="export the topic-by-label entailment matrix")
    p_mat.add_argument("--model", required=True, help="trained model artifact")
    p_mat.add_argument("--top-n", dest="top_n", type=int, default=50)
    p_mat.add_argument("--output", required=True, help="CSV output path")
    p_mat.set_defaults(func=cmd_export_matrix)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
