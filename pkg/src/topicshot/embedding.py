"""Fixed-dimension document embeddings behind pluggable backends.

Three backends share one entry point, :func:`embed`:

* ``hashing`` — deterministic signed feature hashing of word unigrams.  No
  model, no size limit: every token of an arbitrarily long input moves the
  vector.
* ``remote`` — POST to an inference service speaking the ``/embed`` wire
  contract (see the sidecar package).
* ``precomputed`` — id-keyed vectors loaded from a JSONL file, for offline
  reproduction.

All returned vectors are L2-normalized rows of a float64 array.
"""

from __future__ import annotations

import functools
import hashlib
import json
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._http import ContractViolationError, post_json
from ._text import tokenize

_KINDS = ("hashing", "remote", "precomputed")


@dataclass(frozen=True)
class EmbedderSpec:
    """How to turn texts into vectors; serialized into fitted model artifacts."""

    kind: str = "hashing"
    dim: int = 256
    endpoint: str | None = None
    path: str | None = None
    batch_size: int = 64
    max_in_flight: int = 4
    timeout: float = 60.0
    retries: int = 3

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown embedder kind {self.kind!r} (expected one of {_KINDS})")
        if self.dim < 2:
            raise ValueError("embedding dim must be >= 2")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote embedder needs an endpoint")
        if self.kind == "precomputed" and not self.path:
            raise ValueError("precomputed embedder needs a vector file path")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "endpoint": self.endpoint,
            "path": self.path,
            "batch_size": self.batch_size,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EmbedderSpec":
        return cls(
            kind=data["kind"],
            dim=int(data["dim"]),
            endpoint=data.get("endpoint"),
            path=data.get("path"),
            batch_size=int(data.get("batch_size", 64)),
        )


# One in-flight bound per endpoint, shared across calls in this process.
_semaphores: dict[tuple[str, int], threading.Semaphore] = {}
_semaphores_lock = threading.Lock()


def _endpoint_semaphore(endpoint: str, bound: int) -> threading.Semaphore:
    key = (endpoint, bound)
    with _semaphores_lock:
        if key not in _semaphores:
            _semaphores[key] = threading.Semaphore(bound)
        return _semaphores[key]


def embed(
    texts: Sequence[str],
    spec: EmbedderSpec,
    ids: Sequence[str] | None = None,
) -> np.ndarray:
    """Embed ``texts`` into an (n, spec.dim) array of unit rows, order preserved.

    ``ids`` is required by the precomputed backend (vectors are keyed by
    document id) and ignored by the others.
    """
    texts = list(texts)
    for i, t in enumerate(texts):
        if not isinstance(t, str) or not t.strip():
            raise ValueError(f"text #{i} is empty; embeddings need non-empty strings")
    if not texts:
        return np.zeros((0, spec.dim))

    if spec.kind == "hashing":
        rows = [_hash_text(t, spec.dim) for t in texts]
        return np.vstack(rows)
    if spec.kind == "remote":
        return _embed_remote(texts, spec)
    if spec.kind == "precomputed":
        if ids is None:
            raise ValueError("precomputed embedder needs document ids")
        if len(ids) != len(texts):
            raise ValueError("ids and texts must have equal length")
        return _embed_precomputed(list(ids), spec)
    raise ValueError(f"unknown embedder kind {spec.kind!r}")


def _hash_text(text: str, dim: int) -> np.ndarray:
    tokens = tokenize(text)
    if not tokens:
        raise ValueError(f"text {text[:40]!r} has no word tokens to hash")
    v = np.zeros(dim)
    for tok in tokens:
        digest = hashlib.blake2b(tok.encode("utf-8"), digest_size=8).digest()
        bucket = int.from_bytes(digest[:4], "big") % dim
        sign = 1.0 if digest[4] & 1 else -1.0
        v[bucket] += sign
    norm = np.linalg.norm(v)
    if norm == 0.0:
        # Signed collisions cancelled everything; nudge with token count.
        v[len(tokens) % dim] = 1.0
        norm = 1.0
    return v / norm


def _embed_remote(texts: list[str], spec: EmbedderSpec) -> np.ndarray:
    assert spec.endpoint is not None
    sem = _endpoint_semaphore(spec.endpoint, spec.max_in_flight)
    rows: list[np.ndarray] = []
    for start in range(0, len(texts), spec.batch_size):
        chunk = texts[start : start + spec.batch_size]
        body = post_json(
            f"{spec.endpoint.rstrip('/')}/embed",
            {"texts": chunk},
            timeout=spec.timeout,
            retries=spec.retries,
            semaphore=sem,
        )
        vectors = body.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(chunk):
            raise ContractViolationError(
                f"embed service returned {0 if not isinstance(vectors, list) else len(vectors)} "
                f"vectors for {len(chunk)} texts"
            )
        arr = np.asarray(vectors, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != spec.dim:
            raise ContractViolationError(
                f"embed service returned dim {arr.shape[-1] if arr.ndim == 2 else '?'}, expected {spec.dim}"
            )
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms == 0) or not np.all(np.isfinite(arr)):
            raise ContractViolationError("embed service returned zero or non-finite vectors")
        rows.append(arr / norms[:, None])
    return np.vstack(rows)


@functools.lru_cache(maxsize=8)
def _load_precomputed(path: str) -> dict[str, tuple[float, ...]]:
    table: dict[str, tuple[float, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed vector record at {Path(path).name}:{lineno}") from exc
            table[str(obj["id"])] = tuple(float(x) for x in obj["vector"])
    return table


def _embed_precomputed(ids: list[str], spec: EmbedderSpec) -> np.ndarray:
    assert spec.path is not None
    table = _load_precomputed(spec.path)
    rows = []
    for doc_id in ids:
        if doc_id not in table:
            raise KeyError(f"no precomputed vector for id {doc_id!r} in {spec.path}")
        v = np.asarray(table[doc_id], dtype=float)
        if v.shape != (spec.dim,):
            raise ValueError(f"vector for id {doc_id!r} has dim {v.shape[0]}, expected {spec.dim}")
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError(f"vector for id {doc_id!r} is all zeros")
        rows.append(v / norm)
    return np.vstack(rows)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Standard cosine similarity of two vectors, in [-1, 1]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity is undefined for zero vectors")
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))
