"""topicshot: zero-shot multi-class text classification.

Learns a compressed topic representation of an unlabeled corpus, scores each
topic against candidate labels via textual entailment, and classifies
documents by the compound probability of topic membership and topic-label
entailment.  Includes a direct-entailment baseline and the evaluation
harness.
"""

from ._http import ContractViolationError, TransportError
from .corpus import (
    Corpus,
    Document,
    FoldPlan,
    LabelSet,
    filter_labels,
    load_corpus,
    select_folds,
    stratified_kfold,
)
from .embedding import EmbedderSpec, cosine_similarity, embed
from .entailment import (
    DOCUMENT_TEMPLATE,
    TOPIC_TEMPLATE,
    EntailmentBackend,
    EntailmentTable,
    HypothesisTemplate,
    LexicalBackend,
    RemoteBackend,
    render_hypotheses,
    serialize_topic_premise,
)
from .evaluation import (
    ClassifierSetup,
    ExperimentReport,
    ExperimentSpec,
    MetricsReport,
    export_entailment_matrix,
    run_experiment,
    weighted_metrics,
)
from .topic_model import (
    FittedTopicModel,
    Topic,
    TopicDistribution,
    TopicModelConfig,
    cluster,
    extract_topic_terms,
    fit,
    topic_encoder,
)
from .zeroshot import (
    LabelScores,
    TrainedModel,
    compose_probabilities,
    direct_classify,
    predict,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolationError",
    "TransportError",
    "Corpus",
    "Document",
    "FoldPlan",
    "LabelSet",
    "filter_labels",
    "load_corpus",
    "select_folds",
    "stratified_kfold",
    "EmbedderSpec",
    "cosine_similarity",
    "embed",
    "DOCUMENT_TEMPLATE",
    "TOPIC_TEMPLATE",
    "EntailmentBackend",
    "EntailmentTable",
    "HypothesisTemplate",
    "LexicalBackend",
    "RemoteBackend",
    "render_hypotheses",
    "serialize_topic_premise",
    "ClassifierSetup",
    "ExperimentReport",
    "ExperimentSpec",
    "MetricsReport",
    "export_entailment_matrix",
    "run_experiment",
    "weighted_metrics",
    "FittedTopicModel",
    "Topic",
    "TopicDistribution",
    "TopicModelConfig",
    "cluster",
    "extract_topic_terms",
    "fit",
    "topic_encoder",
    "LabelScores",
    "TrainedModel",
    "compose_probabilities",
    "direct_classify",
    "predict",
    "train",
    "__version__",
]
