"""Discover topics in an unlabeled corpus and encode documents over them.

Uses the synthetic three-vocabulary corpus: embeds every document with the
hashing backend, clusters, inspects each topic's characteristic terms, and
shows the topic distribution of a training document and of an unseen one.
"""

import numpy as np

from topicshot import EmbedderSpec, TopicModelConfig, embed, fit
from topicshot.datasets import make_topic_corpus

corpus, labels, _ = make_topic_corpus(seed=7)
print(f"corpus: {len(corpus)} unlabeled documents (gold labels ignored here)")

spec = EmbedderSpec(kind="hashing", dim=256)
vectors = embed(corpus.texts, spec)
print(f"embeddings: {vectors.shape}, every row unit length: "
      f"{np.allclose(np.linalg.norm(vectors, axis=1), 1.0)}")

config = TopicModelConfig(top_n_words=20, min_topic_size=10, distance_threshold=0.6)
model = fit(corpus.training_view(), vectors, config, spec)

print(f"\nfound {model.num_topics} topics ({model.outlier_count} outliers):")
for topic in model.topics:
    print(f"  topic {topic.index} (size {topic.size}): {', '.join(topic.top_terms(8))}")

doc = corpus[0]
omega = model.encode(doc)
print(f"\ntraining document {doc.id} (gold: {doc.gold_label})")
print(f"  topic distribution: {np.round(omega.weights, 4)} -> topic {omega.argmax()}")

unseen = " ".join(model.topics[1].top_terms(6)) + " frase nova"
omega = model.encode(unseen)
print(f"unseen text built from topic 1 terms")
print(f"  topic distribution: {np.round(omega.weights, 4)} -> topic {omega.argmax()}")
