"""Shared fixtures: planted corpora, hand-built models, synthetic image classes."""

import numpy as np
import pytest

from latentlab import (
    EmbeddingModel,
    Image,
    TrainingConfig,
    Vocabulary,
    build_word_dimension,
    fit_latent_model,
    tokenize,
    train_embeddings,
)

BLOCK_A = ("a1", "a2", "a3", "a4", "a5")
BLOCK_B = ("b1", "b2", "b3", "b4", "b5")


def make_block_corpus(n_sentences: int = 200, words_per_sentence: int = 8) -> str:
    """Corpus with planted structure: each sentence draws from one topic block."""
    rng = np.random.default_rng(42)
    lines = []
    for i in range(n_sentences):
        block = BLOCK_A if i % 2 == 0 else BLOCK_B
        lines.append(" ".join(rng.choice(block, size=words_per_sentence)))
    return "\n".join(lines)


@pytest.fixture(scope="session")
def block_corpus() -> str:
    return make_block_corpus()


@pytest.fixture(scope="session")
def block_model(block_corpus) -> EmbeddingModel:
    # Multi-second training run, so built once and shared read-only.
    config = TrainingConfig(dim=16, epochs=15, seed=1)
    return train_embeddings(tokenize(block_corpus), config)


def make_cold_hot_model() -> EmbeddingModel:
    """Two-word model with hand-set unit vectors; exact algebra by hand."""
    vocab = Vocabulary(words=["cold", "hot"], counts=np.array([2, 2]))
    vectors = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=np.float32)
    config = TrainingConfig(dim=2, min_count=1)
    return EmbeddingModel(vocab, vectors, np.zeros_like(vectors), config)


@pytest.fixture
def cold_hot_model() -> EmbeddingModel:
    return make_cold_hot_model()


@pytest.fixture
def cold_hot_dim(cold_hot_model):
    return build_word_dimension(cold_hot_model, ["cold"], ["hot"])


def make_image_classes() -> tuple[list[Image], list[Image]]:
    """Two 4x4 grayscale classes: dark left half vs dark right half."""
    lows, highs = (0.05, 0.10, 0.15), (0.85, 0.90, 0.95)
    class_a, class_b = [], []
    for low, high in zip(lows, highs):
        row_a = [low, low, high, high]
        row_b = [high, high, low, low]
        class_a.append(Image(4, 4, np.array(row_a * 4)))
        class_b.append(Image(4, 4, np.array(row_b * 4)))
    return class_a, class_b


@pytest.fixture
def image_classes():
    return make_image_classes()


@pytest.fixture
def image_model(image_classes):
    class_a, class_b = image_classes
    return fit_latent_model(class_a + class_b, q=4)
