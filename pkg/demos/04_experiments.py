"""Run the four fold experiments and compare against the truncated baseline.

exp1/exp3 evaluate the model on its own (unsupervised) training folds;
exp2/exp4 evaluate on folds the topic model never saw.  The baseline needs no
training, so its train time is always zero.
"""

from topicshot import (
    DOCUMENT_TEMPLATE,
    ClassifierSetup,
    EmbedderSpec,
    ExperimentSpec,
    HypothesisTemplate,
    LexicalBackend,
    TOPIC_TEMPLATE,
    TopicModelConfig,
    run_experiment,
)
from topicshot.datasets import make_topic_corpus

corpus, labels, lexicon = make_topic_corpus(seed=7)
setup = ClassifierSetup(
    labels=labels,
    topic_template=HypothesisTemplate(TOPIC_TEMPLATE),
    document_template=HypothesisTemplate(DOCUMENT_TEMPLATE),
    tm_config=TopicModelConfig(),
    embedder=EmbedderSpec(kind="hashing", dim=256),
    backend=LexicalBackend(lexicon, labels),
    baseline_max_tokens=16,
)

print(f"{'experiment':<12}{'pipeline F1':>14}{'baseline F1':>14}{'pipeline time':>16}")
for exp_id in ("exp1", "exp2", "exp3", "exp4"):
    spec = ExperimentSpec(exp_id, k=5, seed=29)
    pipeline = run_experiment(spec, corpus, setup)
    baseline = run_experiment(spec, corpus, setup, baseline=True)
    print(
        f"{exp_id:<12}"
        f"{pipeline.mean['f1']:>8.3f} ±{pipeline.std['f1']:.3f}"
        f"{baseline.mean['f1']:>8.3f} ±{baseline.std['f1']:.3f}"
        f"{pipeline.total_time:>14.2f}s"
    )

print("\nfull detail for exp1:")
print(run_experiment(ExperimentSpec("exp1", k=5, seed=29), corpus, setup).format_table())
