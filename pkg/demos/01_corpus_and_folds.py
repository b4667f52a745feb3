"""Ingest a corpus, clean its labels, and split it into stratified folds.

Writes a small JSONL file, loads it back with title+body concatenation,
drops the categories we do not want, and builds a 5-fold plan whose
per-class counts stay within one of exact proportionality.
"""

import json
import tempfile
from collections import Counter
from pathlib import Path

from topicshot import LabelSet, filter_labels, load_corpus, select_folds, stratified_kfold

records = []
for i in range(37):
    records.append({"id": f"n{i}", "title": f"manchete {i}", "content": "corpo da notícia", "label": "esporte"})
for i in range(23):
    records.append({"id": f"m{i}", "title": f"cotação {i}", "content": "mercado em alta", "label": "mercado"})
records.append({"id": "e0", "title": "nota da redação", "content": "sem tema", "label": "editorial"})

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "noticias.jsonl"
    path.write_text("\n".join(json.dumps(r, ensure_ascii=False) for r in records), encoding="utf-8")

    corpus = load_corpus(path, "jsonl", text_fields=["title", "content"])
    print(f"loaded {len(corpus)} documents; first text: {corpus[0].text!r}")

    keep = LabelSet(["esporte", "mercado"])
    cleaned = filter_labels(corpus, keep)
    print(f"after label cleaning: {len(cleaned)} documents ({len(corpus) - len(cleaned)} dropped)")
    print(f"class counts: {cleaned.class_counts()}")

    plan = stratified_kfold(cleaned, k=5, seed=42)
    print("\nper-fold class distribution (37 esporte + 23 mercado over 5 folds):")
    for f in range(plan.k):
        fold = select_folds(cleaned, plan, {f})
        counts = Counter(d.gold_label for d in fold)
        print(f"  fold {f}: {dict(counts)}")

    again = stratified_kfold(cleaned, k=5, seed=42)
    print(f"\nsame seed, same plan: {plan.to_json() == again.to_json()}")
