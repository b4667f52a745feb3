"""Export the topic-by-label entailment matrix for inspection.

The matrix is the trained model's core state: row k, column j holds the
probability that topic k's term list entails the hypothesis for label j.
Rows are the largest topics first, which is how the heatmap of a large run
would be read.
"""

import csv
import tempfile
from pathlib import Path

from topicshot import (
    EmbedderSpec,
    HypothesisTemplate,
    LexicalBackend,
    TOPIC_TEMPLATE,
    TopicModelConfig,
    export_entailment_matrix,
    train,
)
from topicshot.datasets import make_topic_corpus

corpus, labels, lexicon = make_topic_corpus(seed=7)
model = train(
    corpus,
    labels,
    HypothesisTemplate(TOPIC_TEMPLATE),
    TopicModelConfig(),
    LexicalBackend(lexicon, labels),
    EmbedderSpec(kind="hashing", dim=256),
)

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "matrix.csv"
    export_entailment_matrix(model, top_n=50, path=out)

    with open(out, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))

    print(f"exported {len(rows) - 1} topic rows to {out.name}")
    header = rows[0]
    print(f"\n{header[0]:<44}" + "".join(f"{h:>10}" for h in header[1:]))
    for row in rows[1:]:
        cells = "".join(f"{float(c):>10.3f}" for c in row[1:])
        print(f"{row[0]:<44}{cells}")
