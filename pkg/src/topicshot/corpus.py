"""Document collections: ingestion, label filtering, and stratified fold plans.

A :class:`Corpus` is an immutable, ordered collection of :class:`Document`
objects with unique ids.  Gold labels ride along for evaluation but training
code paths consume :meth:`Corpus.training_view`, which strips them.
"""

from __future__ import annotations

import csv
import json
import random
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class Document:
    """One text unit: title-plus-body string with an optional gold label."""

    id: str
    text: str
    gold_label: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be non-empty")
        if not self.text.strip():
            raise ValueError(f"document {self.id!r} has empty text")


@dataclass(frozen=True)
class LabelSet:
    """Ordered, pairwise-distinct label names; the order is the tie-break order."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        names = tuple(labels)
        if not names:
            raise ValueError("label set must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError("label names must be pairwise distinct")
        if any(not n for n in names):
            raise ValueError("label names must be non-empty")
        object.__setattr__(self, "labels", names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, j: int) -> str:
        return self.labels[j]

    def __contains__(self, name: object) -> bool:
        return name in self.labels

    def index(self, name: str) -> int:
        return self.labels.index(name)


class Corpus:
    """Immutable ordered collection of documents with unique ids."""

    def __init__(self, documents: Iterable[Document]):
        docs = tuple(documents)
        seen: set[str] = set()
        for d in docs:
            if d.id in seen:
                raise ValueError(f"duplicate document id {d.id!r}")
            seen.add(d.id)
        self._docs = docs
        self._by_id = {d.id: d for d in docs}

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs)

    def __getitem__(self, i: int) -> Document:
        return self._docs[i]

    def get(self, doc_id: str) -> Document:
        return self._by_id[doc_id]

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self._docs]

    @property
    def texts(self) -> list[str]:
        return [d.text for d in self._docs]

    def training_view(self) -> "Corpus":
        """The same documents with every gold label stripped.

        Training code receives this view so that ground truth cannot leak
        into the unsupervised pipeline.
        """
        return Corpus(Document(d.id, d.text) for d in self._docs)

    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for d in self._docs:
            if d.gold_label is not None:
                counts[d.gold_label] = counts.get(d.gold_label, 0) + 1
        return counts


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every corpus document to one of k folds."""

    k: int
    assignments: Mapping[str, int] = field(hash=False)

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("k must be >= 2")
        for doc_id, fold in self.assignments.items():
            if not 0 <= fold < self.k:
                raise ValueError(f"fold index {fold} for {doc_id!r} outside [0, {self.k})")

    def to_json(self) -> str:
        """Canonical serialization; byte-identical for identical plans."""
        payload = {"k": self.k, "assignments": dict(sorted(self.assignments.items()))}
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def load_corpus(path: str | Path, format: str, text_fields: list[str]) -> Corpus:
    """Load a corpus from a JSONL or CSV file.

    Each record must carry an ``id`` field and every name in ``text_fields``;
    the document text is the field values joined by a single space.  An
    optional ``label`` field becomes the gold label.

    Raises:
        ValueError: on an unknown format, a malformed or incomplete record
            (the error names the offending record), or a duplicate id.
        FileNotFoundError: if ``path`` does not exist.
    """
    path = Path(path)
    if format == "jsonl":
        records = _read_jsonl(path)
    elif format == "csv":
        records = _read_csv(path)
    else:
        raise ValueError(f"unknown corpus format {format!r} (expected 'jsonl' or 'csv')")

    docs = []
    for lineno, record in records:
        where = f"{path.name}:{lineno}"
        if "id" not in record or record["id"] in (None, ""):
            raise ValueError(f"record at {where} has no 'id' field")
        doc_id = str(record["id"])
        parts = []
        for name in text_fields:
            if name not in record or record[name] is None:
                raise ValueError(f"record {doc_id!r} at {where} is missing text field {name!r}")
            parts.append(str(record[name]))
        text = " ".join(parts)
        label = record.get("label")
        if label in ("", None):
            label = None
        else:
            label = str(label)
        try:
            docs.append(Document(id=doc_id, text=text, gold_label=label))
        except ValueError as exc:
            raise ValueError(f"record {doc_id!r} at {where}: {exc}") from exc
    return Corpus(docs)


def _read_jsonl(path: Path) -> list[tuple[int, dict]]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed JSON at {path.name}:{lineno}: {exc}") from exc
            if not isinstance(obj, dict):
                raise ValueError(f"record at {path.name}:{lineno} is not an object")
            records.append((lineno, obj))
    return records


def _read_csv(path: Path) -> list[tuple[int, dict]]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        for lineno, row in enumerate(reader, start=2):
            if None in row:
                raise ValueError(f"malformed CSV row at {path.name}:{lineno}: extra columns")
            records.append((lineno, row))
    return records


def filter_labels(corpus: Corpus, keep: LabelSet) -> Corpus:
    """Drop documents whose gold label is not in ``keep``; unlabeled ones stay."""
    return Corpus(
        d for d in corpus if d.gold_label is None or d.gold_label in keep
    )


def stratified_kfold(corpus: Corpus, k: int, seed: int) -> FoldPlan:
    """Split a fully labeled corpus into k folds preserving class proportions.

    Per class, documents are shuffled with a ``seed``-fixed RNG and dealt
    round-robin over folds starting at fold 0, so remainder documents land in
    the lowest-index folds and every per-class fold count is within one of
    exact proportionality.

    Raises:
        ValueError: if k < 2, the corpus is empty, or any document lacks a
            gold label.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(corpus) == 0:
        raise ValueError("cannot split an empty corpus: every class needs at least one document")
    by_class: dict[str, list[str]] = {}
    for d in corpus:
        if d.gold_label is None:
            raise ValueError(f"document {d.id!r} has no gold label; stratification needs one")
        by_class.setdefault(d.gold_label, []).append(d.id)

    rng = random.Random(seed)
    assignments: dict[str, int] = {}
    for label in sorted(by_class):
        ids = list(by_class[label])
        rng.shuffle(ids)
        for i, doc_id in enumerate(ids):
            assignments[doc_id] = i % k
    return FoldPlan(k=k, assignments=assignments)


def select_folds(corpus: Corpus, plan: FoldPlan, folds: Iterable[int]) -> Corpus:
    """The sub-corpus of exactly the documents assigned to ``folds``."""
    wanted = set(folds)
    for f in wanted:
        if not 0 <= f < plan.k:
            raise ValueError(f"fold index {f} outside [0, {plan.k})")
    picked = []
    for d in corpus:
        if d.id not in plan.assignments:
            raise ValueError(f"document {d.id!r} is not covered by the fold plan")
        if plan.assignments[d.id] in wanted:
            picked.append(d)
    return Corpus(picked)
