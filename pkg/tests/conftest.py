import pytest

from topicshot import (
    DOCUMENT_TEMPLATE,
    TOPIC_TEMPLATE,
    ClassifierSetup,
    EmbedderSpec,
    HypothesisTemplate,
    LexicalBackend,
    TopicModelConfig,
    train,
)
from topicshot.datasets import make_topic_corpus


@pytest.fixture(scope="session")
def synthetic():
    """300-document corpus from three disjoint vocabularies, plus its oracle lexicon."""
    return make_topic_corpus()


@pytest.fixture(scope="session")
def tm_config():
    return TopicModelConfig()


@pytest.fixture(scope="session")
def embedder_spec():
    return EmbedderSpec(kind="hashing", dim=256)


@pytest.fixture(scope="session")
def lexical_backend(synthetic):
    _, labels, lexicon = synthetic
    return LexicalBackend(lexicon, labels)


@pytest.fixture(scope="session")
def classifier_setup(synthetic, tm_config, embedder_spec, lexical_backend):
    _, labels, _ = synthetic
    return ClassifierSetup(
        labels=labels,
        topic_template=HypothesisTemplate(TOPIC_TEMPLATE),
        document_template=HypothesisTemplate(DOCUMENT_TEMPLATE),
        tm_config=tm_config,
        embedder=embedder_spec,
        backend=lexical_backend,
        baseline_max_tokens=16,
    )


@pytest.fixture(scope="session")
def trained_model(synthetic, tm_config, embedder_spec, lexical_backend):
    corpus, labels, _ = synthetic
    return train(
        corpus,
        labels,
        HypothesisTemplate(TOPIC_TEMPLATE),
        tm_config,
        lexical_backend,
        embedder_spec,
    )
