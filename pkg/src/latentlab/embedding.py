"""Words pipeline: tokenize a corpus, train skip-gram embeddings, query them.

The model is trained with skip-gram negative sampling (SGNS) by plain
sequential SGD.  Everything is deterministic: one seeded PCG64 stream drives
vector initialisation, context-radius draws and negative sampling, in that
fixed order, so identical ``(tokens, config)`` always yields a bit-identical
model.

Two matrices are learned, both float32:

* ``input_vectors``  (|V|, dim) -- center-word vectors; these are the
  embeddings served to every downstream consumer.
* ``output_vectors`` (|V|, dim) -- context vectors, kept for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyVocabulary,
    InvalidConfig,
    InvalidEncoding,
    UnknownWord,
    ZeroVector,
)

# Negatives that collide with the positive context word are redrawn at most
# this many times, then kept.
_MAX_REDRAWS = 16


def tokenize(text: str | bytes) -> list[str]:
    """Lowercase ``text`` and split it into letter/digit runs.

    Any character that is not a Unicode letter or digit separates tokens
    (so punctuation, underscores and all whitespace split).  Empty tokens
    are dropped and order is preserved.

    Raises:
        InvalidEncoding: if ``text`` is given as bytes and is not valid UTF-8.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InvalidEncoding(str(exc)) from exc
    tokens: list[str] = []
    current: list[str] = []
    for ch in text.lower():
        if ch.isalpha() or ch.isdigit():
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


@dataclass
class Vocabulary:
    """Ordered vocabulary: descending count, ties by first corpus occurrence.

    ``index`` maps each word to its row in the embedding matrices.
    """

    words: list[str]
    counts: np.ndarray  # int64, aligned with words
    index: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if len(self.words) != len(self.counts):
            raise ValueError("words and counts must have equal length")
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("vocabulary words must be unique")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index


def build_vocab(tokens: list[str], min_count: int = 2) -> Vocabulary:
    """Count tokens and keep those occurring at least ``min_count`` times.

    Raises:
        EmptyVocabulary: if no token survives the threshold.
    """
    if min_count < 1:
        raise InvalidConfig(f"min_count must be >= 1, got {min_count}")
    counts: dict[str, int] = {}
    for tok in tokens:
        counts[tok] = counts.get(tok, 0) + 1
    # dict preserves first-occurrence order; the stable sort keeps that
    # order among equal counts.
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    kept.sort(key=lambda wc: -wc[1])
    if not kept:
        raise EmptyVocabulary(f"no token occurs >= {min_count} times")
    return Vocabulary([w for w, _ in kept], np.array([c for _, c in kept]))


class NegativeTable:
    """Unigram^0.75 distribution over the vocabulary, for negative sampling."""

    def __init__(self, probabilities: np.ndarray):
        self.probabilities = np.asarray(probabilities, dtype=np.float64)
        self._cumulative = np.cumsum(self.probabilities)
        # Guard the top edge so a draw of u ~ 1.0 cannot fall off the table.
        self._cumulative[-1] = 1.0

    def draw(self, rng: np.random.Generator) -> int:
        """Sample one word index."""
        return int(np.searchsorted(self._cumulative, rng.random(), side="right"))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Sample ``n`` word indices in one batch."""
        return np.searchsorted(self._cumulative, rng.random(n), side="right")


def negative_table(vocab: Vocabulary) -> NegativeTable:
    """Sampling distribution with P(w) proportional to count(w)**0.75."""
    if len(vocab) == 0:
        raise EmptyVocabulary("cannot build a table for an empty vocabulary")
    weights = vocab.counts.astype(np.float64) ** 0.75
    return NegativeTable(weights / weights.sum())


def _stable_sigmoid(x: np.ndarray) -> np.ndarray:
    """Elementwise sigmoid, safe against exp overflow for large |x|."""
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def sgns_step(
    v: np.ndarray, u_pos: np.ndarray, u_negs: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss and exact gradients for one (center, context, negatives) triple.

    loss = -log sigma(v.u_pos) - sum_i log sigma(-v.u_negs[i])

    Args:
        v: center vector, shape (dim,).
        u_pos: positive context vector, shape (dim,).
        u_negs: negative context vectors, shape (k, dim).

    Returns:
        (loss, grad_v, grad_u_pos, grad_u_negs), computed in float64.

    Raises:
        DimensionMismatch: if the vectors disagree on dim.
    """
    v = np.asarray(v, dtype=np.float64)
    u_pos = np.asarray(u_pos, dtype=np.float64)
    u_negs = np.atleast_2d(np.asarray(u_negs, dtype=np.float64))
    if v.shape != u_pos.shape or u_negs.shape[1:] != v.shape:
        raise DimensionMismatch(
            f"center {v.shape}, context {u_pos.shape}, negatives {u_negs.shape}"
        )
    pos_score = v @ u_pos
    neg_scores = u_negs @ v
    # -log sigma(x) = log(1 + exp(-x)); -log sigma(-x) = log(1 + exp(x))
    loss = np.logaddexp(0.0, -pos_score) + np.logaddexp(0.0, neg_scores).sum()
    sig_pos = _stable_sigmoid(np.atleast_1d(pos_score))[0]
    sig_negs = _stable_sigmoid(neg_scores)
    grad_v = (sig_pos - 1.0) * u_pos + sig_negs @ u_negs
    grad_u_pos = (sig_pos - 1.0) * v
    grad_u_negs = sig_negs[:, None] * v[None, :]
    return float(loss), grad_v, grad_u_pos, grad_u_negs


@dataclass(frozen=True)
class TrainingConfig:
    """Hyperparameters for SGNS training.

    Raises:
        InvalidConfig: on any bound violation.
    """

    dim: int = 64
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    lr_start: float = 0.025
    lr_end: float = 0.0001
    min_count: int = 2
    seed: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidConfig(f"dim must be >= 2, got {self.dim}")
        if self.window < 1:
            raise InvalidConfig(f"window must be >= 1, got {self.window}")
        if self.negatives < 1:
            raise InvalidConfig(f"negatives must be >= 1, got {self.negatives}")
        if self.epochs < 1:
            raise InvalidConfig(f"epochs must be >= 1, got {self.epochs}")
        if not (0.0 < self.lr_end <= self.lr_start):
            raise InvalidConfig(
                f"need 0 < lr_end <= lr_start, got {self.lr_end} / {self.lr_start}"
            )
        if self.min_count < 1:
            raise InvalidConfig(f"min_count must be >= 1, got {self.min_count}")
        if not (-(2**63) <= int(self.seed) < 2**63):
            raise InvalidConfig("seed must fit in 64 bits")


@dataclass
class EmbeddingModel:
    """A trained words-pipeline model.  Immutable once constructed."""

    vocab: Vocabulary
    input_vectors: np.ndarray  # (|V|, dim) float32
    output_vectors: np.ndarray  # (|V|, dim) float32
    config: TrainingConfig
    # Mean per-pair loss of each epoch; a training diagnostic, not persisted.
    epoch_losses: tuple[float, ...] = ()

    def __post_init__(self):
        self.input_vectors = np.ascontiguousarray(self.input_vectors, dtype=np.float32)
        self.output_vectors = np.ascontiguousarray(self.output_vectors, dtype=np.float32)
        expect = (len(self.vocab), self.config.dim)
        if self.input_vectors.shape != expect or self.output_vectors.shape != expect:
            raise DimensionMismatch(
                f"matrices must be {expect}, got {self.input_vectors.shape} "
                f"and {self.output_vectors.shape}"
            )
        if not (
            np.isfinite(self.input_vectors).all()
            and np.isfinite(self.output_vectors).all()
        ):
            raise ValueError("embedding matrices must be finite")
        self.input_vectors.flags.writeable = False
        self.output_vectors.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.config.dim


def _pair_schedule(
    ids: np.ndarray, epochs: int, window: int, rng: np.random.Generator
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Enumerate every (center, context) pair, one array pair per epoch.

    The context radius of each token position is drawn uniformly from
    [1, window]; contexts are emitted left to right within the radius.
    """
    n = len(ids)
    radii = rng.integers(1, window + 1, size=(epochs, n))
    schedule = []
    for e in range(epochs):
        centers: list[np.ndarray] = []
        contexts: list[np.ndarray] = []
        for i in range(n):
            r = int(radii[e, i])
            lo, hi = max(0, i - r), min(n, i + r + 1)
            ctx = np.concatenate((ids[lo:i], ids[i + 1 : hi]))
            if len(ctx):
                centers.append(np.full(len(ctx), ids[i], dtype=np.int64))
                contexts.append(ctx)
        if centers:
            schedule.append((np.concatenate(centers), np.concatenate(contexts)))
        else:
            schedule.append((np.empty(0, np.int64), np.empty(0, np.int64)))
    return schedule


def train_embeddings(tokens: list[str], config: TrainingConfig) -> EmbeddingModel:
    """Train an SGNS embedding model over one continuous token stream.

    Tokens below ``config.min_count`` are dropped from the stream before
    windows are formed.  The learning rate decays linearly from ``lr_start``
    to ``lr_end`` over the total number of scheduled pairs.

    Raises:
        EmptyVocabulary: if no token survives ``config.min_count``.
    """
    vocab = build_vocab(tokens, config.min_count)
    table = negative_table(vocab)
    ids = np.array([vocab.index[t] for t in tokens if t in vocab.index], np.int64)

    rng = np.random.default_rng(config.seed)
    nv, dim = len(vocab), config.dim
    w_in = (rng.random((nv, dim), dtype=np.float32) - np.float32(0.5)) / np.float32(dim)
    w_out = np.zeros((nv, dim), dtype=np.float32)

    schedule = _pair_schedule(ids, config.epochs, config.window, rng)
    total_pairs = sum(len(c) for c, _ in schedule)
    lr_span = config.lr_end - config.lr_start
    denom = max(total_pairs - 1, 1)

    epoch_losses = []
    k = 0  # global pair index, drives the lr decay
    n_neg = config.negatives
    for centers, contexts in schedule:
        loss_sum = 0.0
        for c, ctx in zip(centers.tolist(), contexts.tolist()):
            lr = np.float32(config.lr_start + lr_span * (k / denom))
            k += 1

            negs = table.sample(rng, n_neg)
            for j in range(n_neg):
                tries = 0
                while negs[j] == ctx and tries < _MAX_REDRAWS:
                    negs[j] = table.draw(rng)
                    tries += 1

            v = w_in[c].copy()
            u_pos = w_out[ctx].copy()
            u_negs = w_out[negs]  # fancy indexing copies

            pos_score = v @ u_pos
            neg_scores = u_negs @ v
            sig_pos = _stable_sigmoid(np.atleast_1d(pos_score))[0]
            sig_negs = _stable_sigmoid(neg_scores)
            loss_sum += float(np.logaddexp(0.0, -pos_score)) + float(
                np.logaddexp(0.0, neg_scores).sum()
            )

            w_in[c] -= lr * ((sig_pos - np.float32(1.0)) * u_pos + sig_negs @ u_negs)
            w_out[ctx] -= lr * (sig_pos - np.float32(1.0)) * v
            # duplicate negatives must each contribute their update
            np.subtract.at(w_out, negs, (lr * sig_negs)[:, None] * v[None, :])

        epoch_losses.append(loss_sum / max(len(centers), 1))

    return EmbeddingModel(vocab, w_in, w_out, config, tuple(epoch_losses))


def vector(model: EmbeddingModel, word: str) -> np.ndarray:
    """The input (center) vector of ``word``.

    Lookup is post-tokenization: the caller must lowercase first.

    Raises:
        UnknownWord: if ``word`` is not in the vocabulary.
    """
    idx = model.vocab.index.get(word)
    if idx is None:
        raise UnknownWord(word)
    return model.input_vectors[idx]


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity of two non-zero vectors, in [-1, 1].

    Raises:
        DimensionMismatch: if the vectors differ in length.
        ZeroVector: if either vector has zero norm.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine of a zero vector is undefined")
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def nearest_neighbors(
    model: EmbeddingModel,
    query: np.ndarray,
    k: int,
    exclude: set[str] | frozenset[str] = frozenset(),
) -> list[tuple[str, float]]:
    """Top-k vocabulary words by cosine similarity to ``query``.

    Descending similarity; exact ties broken by ascending vocabulary index.
    Words in ``exclude`` (and any zero-norm rows) are skipped, so fewer than
    ``k`` results are returned only when the vocabulary is too small.

    Raises:
        ZeroVector: if ``query`` has zero norm.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    q = np.asarray(query, dtype=np.float64)
    qn = np.linalg.norm(q)
    if qn == 0.0:
        raise ZeroVector("cannot search for neighbors of the zero vector")
    mat = model.input_vectors.astype(np.float64)
    norms = np.linalg.norm(mat, axis=1)
    valid = norms > 0.0
    sims = np.full(len(mat), -np.inf)
    sims[valid] = mat[valid] @ q / (norms[valid] * qn)
    for word in exclude:
        idx = model.vocab.index.get(word)
        if idx is not None:
            sims[idx] = -np.inf
    # masked entries (-inf) sort to the back, so we can walk the order
    # front-to-front and stop at the first masked hit
    order = np.lexsort((np.arange(len(sims)), -sims))
    out: list[tuple[str, float]] = []
    for idx in order:
        if sims[idx] == -np.inf:
            break
        out.append((model.vocab.words[idx], float(np.clip(sims[idx], -1.0, 1.0))))
        if len(out) == k:
            break
    return out
