"""Inference engines behind the HTTP surface.

``StubEngine`` is hermetic: it serves recorded request/response fixtures
verbatim and falls back to deterministic arithmetic (hashed bag-of-words
embeddings, token-overlap entailment) for anything unrecorded, so CI needs no
model downloads.  ``RealEngine`` loads a multilingual sentence encoder and an
NLI cross-encoder lazily; any load failure surfaces as
``ModelNotLoadedError`` and the service answers 503.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import numpy as np

_WORD = re.compile(r"\w+", re.UNICODE)


class ModelNotLoadedError(RuntimeError):
    """The engine's model is unavailable; requests must answer 503."""


def _tokens(text: str) -> list[str]:
    return _WORD.findall(text.lower())


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class FixtureStore:
    """Recorded request/response pairs, matched on canonicalized requests."""

    def __init__(self, path: str | Path | None):
        self._table: dict[tuple[str, str], dict] = {}
        self.count = 0
        if path is None:
            return
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        for fixture in data.get("fixtures", []):
            key = (fixture["endpoint"], _canonical(fixture["request"]))
            self._table[key] = fixture["response"]
        self.count = len(self._table)

    def lookup(self, endpoint: str, request: dict) -> dict | None:
        return self._table.get((endpoint, _canonical(request)))


class StubEngine:
    """Deterministic, download-free engine for CI and contract tests."""

    mode = "stub"

    def __init__(
        self,
        fixtures: FixtureStore | None = None,
        dim: int = 16,
        context_limit: int = 512,
        temperature: float = 0.1,
    ):
        self.fixtures = fixtures or FixtureStore(None)
        self.dim = dim
        self.context_limit = context_limit
        self.temperature = temperature

    @property
    def model_ids(self) -> dict[str, str]:
        return {"embedding": "stub-hash", "entailment": "stub-overlap"}

    def ensure_ready(self) -> None:
        pass

    def embed(self, texts: list[str]) -> dict:
        recorded = self.fixtures.lookup("/embed", {"texts": texts})
        if recorded is not None:
            return recorded
        return {"vectors": [self._hash_vector(t) for t in texts], "dim": self.dim}

    def _hash_vector(self, text: str) -> list[float]:
        v = np.zeros(self.dim)
        tokens = _tokens(text)
        for tok in tokens:
            digest = hashlib.blake2b(tok.encode("utf-8"), digest_size=8).digest()
            v[int.from_bytes(digest[:4], "big") % self.dim] += 1.0 if digest[4] & 1 else -1.0
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            v[len(text) % self.dim] = 1.0
            norm = 1.0
        return [float(x) for x in v / norm]

    def entail(self, premise: str, hypotheses: list[str], normalize: bool) -> dict:
        recorded = self.fixtures.lookup(
            "/entail", {"premise": premise, "hypotheses": hypotheses, "normalize": normalize}
        )
        if recorded is not None:
            return recorded

        premise_tokens = _tokens(premise)
        truncated = len(premise_tokens) > self.context_limit
        if truncated:
            premise_tokens = premise_tokens[: self.context_limit]
        bag = set(premise_tokens)

        raw = []
        for h in hypotheses:
            h_tokens = _tokens(h)
            overlap = sum(1 for t in h_tokens if t in bag) / max(1, len(h_tokens))
            raw.append(0.05 + 0.9 * overlap)
        scores = np.asarray(raw)
        if normalize:
            logits = scores / self.temperature
            logits -= logits.max()
            exp = np.exp(logits)
            scores = exp / exp.sum()
        return {"probs": [float(p) for p in scores], "truncated": truncated}


class RealEngine:
    """Transformer-backed engine; models load on first use."""

    mode = "real"

    def __init__(
        self,
        embedding_model: str = "bert-base-multilingual-cased",
        entailment_model: str = "joeddav/xlm-roberta-large-xnli",
        context_limit: int = 512,
    ):
        self.embedding_model = embedding_model
        self.entailment_model = entailment_model
        self.context_limit = context_limit
        self._encoder = None
        self._nli = None

    @property
    def model_ids(self) -> dict[str, str]:
        return {"embedding": self.embedding_model, "entailment": self.entailment_model}

    def ensure_ready(self) -> None:
        if self._encoder is not None and self._nli is not None:
            return
        try:
            import torch
            from transformers import (
                AutoModel,
                AutoModelForSequenceClassification,
                AutoTokenizer,
            )

            enc_tok = AutoTokenizer.from_pretrained(self.embedding_model)
            enc = AutoModel.from_pretrained(self.embedding_model).eval()
            nli_tok = AutoTokenizer.from_pretrained(self.entailment_model)
            nli = AutoModelForSequenceClassification.from_pretrained(self.entailment_model).eval()
        except Exception as exc:
            raise ModelNotLoadedError(f"cannot load models: {exc}") from exc
        self._torch = torch
        self._encoder = (enc_tok, enc)
        self._nli = (nli_tok, nli)

    def embed(self, texts: list[str]) -> dict:
        self.ensure_ready()
        tok, model = self._encoder
        torch = self._torch
        with torch.no_grad():
            batch = tok(texts, padding=True, truncation=True, return_tensors="pt")
            hidden = model(**batch).last_hidden_state
            mask = batch["attention_mask"].unsqueeze(-1)
            pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1)
            vectors = torch.nn.functional.normalize(pooled, dim=1).cpu().numpy()
        return {
            "vectors": [[float(x) for x in row] for row in vectors],
            "dim": int(vectors.shape[1]),
        }

    def entail(self, premise: str, hypotheses: list[str], normalize: bool) -> dict:
        self.ensure_ready()
        tok, model = self._nli
        torch = self._torch
        entail_idx = None
        for name, idx in model.config.label2id.items():
            if name.lower().startswith("entail"):
                entail_idx = idx
        if entail_idx is None:
            raise ModelNotLoadedError("NLI model exposes no entailment label")

        max_len = min(self.context_limit, tok.model_max_length)
        truncated = len(tok(premise)["input_ids"]) > max_len
        with torch.no_grad():
            batch = tok(
                [premise] * len(hypotheses),
                hypotheses,
                padding=True,
                truncation="only_first",
                max_length=max_len,
                return_tensors="pt",
            )
            logits = model(**batch).logits
            if normalize:
                probs = torch.softmax(logits[:, entail_idx], dim=0)
            else:
                probs = torch.softmax(logits, dim=1)[:, entail_idx]
        return {"probs": [float(p) for p in probs], "truncated": truncated}
