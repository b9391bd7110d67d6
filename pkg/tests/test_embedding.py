"""Tokenizer, vocabulary, SGNS objective, and training determinism."""

import numpy as np
import pytest

from latentlab import (
    EmbeddingModel,
    TrainingConfig,
    Vocabulary,
    build_vocab,
    cosine,
    nearest_neighbors,
    negative_table,
    sgns_step,
    tokenize,
    train_embeddings,
    vector,
)
from latentlab.errors import (
    DimensionMismatch,
    EmptyVocabulary,
    InvalidConfig,
    InvalidEncoding,
    UnknownWord,
    ZeroVector,
)


class TestTokenize:
    def test_lowercases_and_splits_on_punctuation(self):
        assert tokenize("Hot, cold; HOT!") == ["hot", "cold", "hot"]

    def test_empty_input(self):
        assert tokenize("") == []

    def test_digits_are_token_characters(self):
        assert tokenize("a1 b-2") == ["a1", "b", "2"]

    def test_unicode_letters_kept(self):
        assert tokenize("Café déjà-vu") == ["café", "déjà", "vu"]

    def test_bytes_decoded_as_utf8(self):
        assert tokenize("héllo wörld".encode()) == ["héllo", "wörld"]

    def test_invalid_utf8_rejected(self):
        with pytest.raises(InvalidEncoding):
            tokenize(b"\xff\xfe bad")

    def test_whitespace_only(self):
        assert tokenize(" \t\n ") == []


class TestBuildVocab:
    def test_descending_count_ties_by_first_occurrence(self):
        tokens = ["z", "b", "b", "a", "a", "z", "q"]
        vocab = build_vocab(tokens, min_count=1)
        # z and b and a all have count 2; z seen first, then b, then a
        assert vocab.words == ["z", "b", "a", "q"]
        assert list(vocab.counts) == [2, 2, 2, 1]

    def test_min_count_filters(self):
        vocab = build_vocab(["x", "x", "y"], min_count=2)
        assert vocab.words == ["x"]

    def test_all_filtered_raises(self):
        with pytest.raises(EmptyVocabulary):
            build_vocab(["x", "y"], min_count=2)

    def test_empty_tokens_raise(self):
        with pytest.raises(EmptyVocabulary):
            build_vocab([], min_count=1)

    def test_index_maps_words_to_rows(self):
        vocab = build_vocab(["a", "a", "b"], min_count=1)
        assert vocab.index == {"a": 0, "b": 1}
        assert "a" in vocab and "missing" not in vocab
        assert len(vocab) == 2


class TestNegativeTable:
    def test_powered_unigram_probabilities(self):
        # counts [16, 1] -> 16^0.75 : 1^0.75 = 8 : 1
        vocab = Vocabulary(words=["big", "small"], counts=np.array([16, 1]))
        table = negative_table(vocab)
        np.testing.assert_allclose(table.probabilities, [8 / 9, 1 / 9], atol=1e-12)

    def test_draw_frequencies_match_probabilities(self):
        vocab = Vocabulary(words=["a", "b", "c"], counts=np.array([16, 16, 1]))
        table = negative_table(vocab)
        rng = np.random.default_rng(7)
        draws = table.sample(rng, 20000)
        freqs = np.bincount(draws, minlength=3) / 20000
        np.testing.assert_allclose(freqs, table.probabilities, atol=0.02)

    def test_single_word_table_always_draws_it(self):
        vocab = Vocabulary(words=["only"], counts=np.array([3]))
        table = negative_table(vocab)
        rng = np.random.default_rng(0)
        assert set(table.sample(rng, 50)) == {0}


class TestSgnsStep:
    def test_loss_oracle_orthogonal_case(self):
        # v = u_pos = e1, one negative e2: scores 1 and 0.
        # loss = -log sigma(1) - log sigma(0)
        #      = 0.31326168751822286 + 0.6931471805599453 (hand-computed)
        v = np.array([1.0, 0.0])
        loss, grad_v, grad_u_pos, grad_u_negs = sgns_step(
            v, np.array([1.0, 0.0]), np.array([[0.0, 1.0]])
        )
        assert loss == pytest.approx(1.0064088680781682, abs=1e-12)
        # sigma(1) - 1 = -0.2689414213699951, sigma(0) = 0.5
        np.testing.assert_allclose(grad_v, [-0.2689414213699951, 0.5], atol=1e-12)
        np.testing.assert_allclose(grad_u_pos, [-0.2689414213699951, 0.0], atol=1e-12)
        np.testing.assert_allclose(grad_u_negs, [[0.5, 0.0]], atol=1e-12)

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(11)
        h = 1e-4
        for _ in range(30):
            dim, n_neg = rng.integers(2, 9), rng.integers(1, 5)
            v = rng.normal(0, 1, dim)
            u_pos = rng.normal(0, 1, dim)
            u_negs = rng.normal(0, 1, (n_neg, dim))
            _, grad_v, grad_u_pos, grad_u_negs = sgns_step(v, u_pos, u_negs)

            for j in range(dim):
                dv = np.zeros(dim)
                dv[j] = h
                up = sgns_step(v + dv, u_pos, u_negs)[0]
                dn = sgns_step(v - dv, u_pos, u_negs)[0]
                fd = (up - dn) / (2 * h)
                assert grad_v[j] == pytest.approx(fd, rel=1e-4, abs=1e-8)
                up = sgns_step(v, u_pos + dv, u_negs)[0]
                dn = sgns_step(v, u_pos - dv, u_negs)[0]
                fd = (up - dn) / (2 * h)
                assert grad_u_pos[j] == pytest.approx(fd, rel=1e-4, abs=1e-8)

    def test_loss_nonnegative_and_overflow_safe(self):
        v = np.full(4, 200.0)
        loss, *_ = sgns_step(v, -v, np.stack([v, v]))
        assert np.isfinite(loss) and loss > 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sgns_step(np.zeros(3), np.zeros(4), np.zeros((1, 3)))


class TestTrainingConfig:
    def test_defaults(self):
        config = TrainingConfig()
        assert (config.dim, config.window, config.negatives) == (64, 5, 5)
        assert (config.epochs, config.min_count) == (5, 2)
        assert (config.lr_start, config.lr_end) == (0.025, 0.0001)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"dim": 1},
            {"dim": 0},
            {"window": 0},
            {"negatives": 0},
            {"epochs": 0},
            {"lr_start": 0.0},
            {"lr_end": 0.0},
            {"lr_start": 0.01, "lr_end": 0.02},
            {"min_count": 0},
        ],
    )
    def test_invalid_values_rejected(self, kwargs):
        with pytest.raises(InvalidConfig):
            TrainingConfig(**kwargs)

    def test_frozen(self):
        with pytest.raises(Exception):
            TrainingConfig().dim = 3


class TestTrainEmbeddings:
    CORPUS = "the cat sat on the mat while the dog sat on the log " * 10

    def test_bit_identical_across_runs(self):
        config = TrainingConfig(dim=8, epochs=2, seed=5)
        tokens = tokenize(self.CORPUS)
        m1 = train_embeddings(tokens, config)
        m2 = train_embeddings(tokens, config)
        assert m1.input_vectors.tobytes() == m2.input_vectors.tobytes()
        assert m1.output_vectors.tobytes() == m2.output_vectors.tobytes()

    def test_different_seeds_differ(self):
        tokens = tokenize(self.CORPUS)
        m1 = train_embeddings(tokens, TrainingConfig(dim=8, epochs=1, seed=1))
        m2 = train_embeddings(tokens, TrainingConfig(dim=8, epochs=1, seed=2))
        assert m1.input_vectors.tobytes() != m2.input_vectors.tobytes()

    def test_min_count_words_absent(self):
        tokens = tokenize(self.CORPUS + " unicorn")
        model = train_embeddings(tokens, TrainingConfig(dim=4, epochs=1))
        assert "unicorn" not in model.vocab
        with pytest.raises(UnknownWord):
            vector(model, "unicorn")

    def test_empty_vocabulary_propagates(self):
        with pytest.raises(EmptyVocabulary):
            train_embeddings(["once", "each", "word"], TrainingConfig(dim=4))

    def test_model_shapes_and_immutability(self):
        model = train_embeddings(tokenize(self.CORPUS), TrainingConfig(dim=8, epochs=1))
        nv = len(model.vocab)
        assert model.input_vectors.shape == (nv, 8)
        assert model.input_vectors.dtype == np.float32
        assert not model.input_vectors.flags.writeable
        with pytest.raises(ValueError):
            model.input_vectors[0, 0] = 1.0

    def test_epoch_losses_recorded(self):
        model = train_embeddings(tokenize(self.CORPUS), TrainingConfig(dim=8, epochs=3))
        assert len(model.epoch_losses) == 3
        assert all(np.isfinite(x) and x > 0 for x in model.epoch_losses)

    def test_vectors_are_finite(self):
        model = train_embeddings(tokenize(self.CORPUS), TrainingConfig(dim=8, epochs=2))
        assert np.isfinite(model.input_vectors).all()


class TestVectorCosine:
    def test_vector_returns_exact_row(self, cold_hot_model):
        np.testing.assert_array_equal(vector(cold_hot_model, "hot"), [0.0, 1.0])

    def test_lookup_is_case_sensitive_post_tokenization(self, cold_hot_model):
        with pytest.raises(UnknownWord) as exc:
            vector(cold_hot_model, "COLD")
        assert "COLD" in str(exc.value)

    def test_cosine_identity_orthogonal_antiparallel(self):
        e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        assert cosine(e1, e1) == pytest.approx(1.0)
        assert cosine(e1, e2) == pytest.approx(0.0)
        assert cosine(e1, np.array([-2.0, 0.0])) == pytest.approx(-1.0)

    def test_cosine_errors(self):
        with pytest.raises(ZeroVector):
            cosine(np.zeros(2), np.ones(2))
        with pytest.raises(DimensionMismatch):
            cosine(np.ones(2), np.ones(3))

    def test_cosine_stays_in_range(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a, b = rng.normal(0, 1, 5), rng.normal(0, 1, 5)
            assert -1.0 <= cosine(a, b) <= 1.0


def hand_model(rows, words=None):
    rows = np.asarray(rows, dtype=np.float32)
    words = words or [f"w{i}" for i in range(len(rows))]
    vocab = Vocabulary(words=words, counts=np.arange(len(rows), 0, -1))
    config = TrainingConfig(dim=rows.shape[1], min_count=1)
    return EmbeddingModel(vocab, rows, np.zeros_like(rows), config)


class TestNearestNeighbors:
    def test_self_is_first_with_unit_similarity(self, cold_hot_model):
        hits = nearest_neighbors(cold_hot_model, vector(cold_hot_model, "cold"), k=2)
        assert hits[0] == ("cold", pytest.approx(1.0))

    def test_exclusion(self, cold_hot_model):
        hits = nearest_neighbors(
            cold_hot_model, vector(cold_hot_model, "cold"), k=2, exclude={"cold"}
        )
        assert [w for w, _ in hits] == ["hot"]

    def test_exact_ties_break_by_vocab_index(self):
        # w1 and w3 have identical vectors; w1 has the lower index
        model = hand_model([[0.0, 1.0], [1.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
                           ["w0", "w1", "w2", "w3"])
        hits = nearest_neighbors(model, np.array([1.0, 1.0]), k=4)
        # w0 and w3 tie at 1/sqrt(2) as well; index order again
        assert [w for w, _ in hits] == ["w1", "w2", "w0", "w3"]

    def test_zero_rows_skipped(self):
        model = hand_model([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        hits = nearest_neighbors(model, np.array([1.0, 1.0]), k=3)
        assert [w for w, _ in hits] == ["w1", "w2"]

    def test_descending_similarity(self):
        rng = np.random.default_rng(9)
        model = hand_model(rng.normal(0, 1, (20, 6)))
        hits = nearest_neighbors(model, rng.normal(0, 1, 6), k=20)
        sims = [s for _, s in hits]
        assert sims == sorted(sims, reverse=True)

    def test_k_larger_than_vocab(self, cold_hot_model):
        assert len(nearest_neighbors(cold_hot_model, np.array([1.0, 1.0]), k=99)) == 2

    def test_zero_query_rejected(self, cold_hot_model):
        with pytest.raises(ZeroVector):
            nearest_neighbors(cold_hot_model, np.zeros(2), k=1)

    def test_k_below_one_rejected(self, cold_hot_model):
        with pytest.raises(ValueError):
            nearest_neighbors(cold_hot_model, np.ones(2), k=0)
