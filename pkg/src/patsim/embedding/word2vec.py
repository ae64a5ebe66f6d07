"""Word2vec (skip-gram, negative sampling) and TF-IDF weighted pooling.

The document vector of a text is the TF-IDF weighted mean of its
in-vocabulary word vectors:

    v(d) = sum_t tf(t,d) * idf(t) * w(t)  /  sum_t tf(t,d) * idf(t)

with the smoothed idf(t) = ln((1+N)/(1+df(t))) + 1 (raw-log variant
available via ``idf_variant="raw"``).  Out-of-vocabulary tokens are
skipped; a text with no in-vocabulary token has no embedding and raises
UndefinedEmbeddingError rather than returning a zero vector.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError, TrainingError, UndefinedEmbeddingError
from ..seeds import stage_rng
from .sgns import NegativeSampler, center_step
from .text import tokenize
from .vocab import Vocabulary, build_vocabulary


@dataclass(frozen=True)
class SgnsParams:
    dim: int = 300
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    lr_initial: float = 0.025
    lr_final: float = 0.0001
    min_count: int = 5
    seed: int = 1

    def validate(self) -> None:
        if self.dim < 1 or self.window < 1 or self.negatives < 1 or self.epochs < 0:
            raise ParameterError(f"invalid SGNS parameters: {self}")


def _init_vectors(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    return ((rng.random((n, dim)) - 0.5) / dim).astype(np.float32)


@dataclass
class Word2vecModel:
    vocab: Vocabulary
    vectors_in: np.ndarray  # |V| x d, the word vectors used downstream
    vectors_out: np.ndarray  # |V| x d, output (context) matrix
    params: SgnsParams
    epoch_losses: list[float] = field(default_factory=list)

    def vector(self, token: str) -> np.ndarray:
        return self.vectors_in[self.vocab.index[token]]


def train_word2vec(docs_tokens: list[list[str]], params: SgnsParams) -> Word2vecModel:
    """Train SGNS word vectors over pre-tokenized documents.

    The context window is fixed at ``params.window`` on each side (no
    random shrinking, no frequent-word subsampling) so one run is
    auditable sample by sample.  Deterministic under a fixed seed.
    """
    params.validate()
    vocab = build_vocabulary(docs_tokens, min_count=params.min_count)
    rng_init = stage_rng(params.seed, "w2v-init")
    vectors_in = _init_vectors(rng_init, len(vocab), params.dim)
    vectors_out = np.zeros((len(vocab), params.dim), dtype=np.float32)

    sentences = [
        np.array([vocab.index[t] for t in tokens if t in vocab], dtype=np.int64)
        for tokens in docs_tokens
    ]
    sentences = [s for s in sentences if s.shape[0] >= 2]
    sampler = NegativeSampler.from_frequencies(vocab.corpus_freq)
    rng_train = stage_rng(params.seed, "w2v-train")

    total_centers = params.epochs * sum(s.shape[0] for s in sentences)
    if total_centers == 0 and params.epochs > 0:
        raise TrainingError("no trainable sentence has two in-vocabulary tokens")

    model = Word2vecModel(vocab, vectors_in, vectors_out, params)
    step = 0
    w = params.window
    for _ in range(params.epochs):
        epoch_loss = 0.0
        epoch_samples = 0
        for sent in sentences:
            n = sent.shape[0]
            for pos in range(n):
                lr = params.lr_initial + (params.lr_final - params.lr_initial) * (
                    step / max(1, total_centers - 1)
                )
                contexts = np.concatenate([sent[max(0, pos - w) : pos], sent[pos + 1 : pos + 1 + w]])
                step += 1
                if contexts.shape[0] == 0:
                    continue
                negs = sampler.draw(rng_train, (contexts.shape[0], params.negatives))
                center = vectors_in[sent[pos]]
                epoch_loss += center_step(center, vectors_out, contexts, negs, lr)
                epoch_samples += contexts.shape[0]
        if epoch_samples:
            model.epoch_losses.append(epoch_loss / epoch_samples)
    return model


def compute_idf(doc_freq, n_docs: int, variant: str = "smooth") -> np.ndarray:
    """Per-token idf from document frequencies.

    smooth: ln((1+N)/(1+df)) + 1  (default; never negative, defined at df=0)
    raw:    ln(N/df)
    """
    df = np.asarray(doc_freq, dtype=np.float64)
    if variant == "smooth":
        return np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
    if variant == "raw":
        return np.log(n_docs / df)
    raise ParameterError(f"unknown idf variant: {variant!r}")


def idf_for_unseen(n_docs: int, variant: str = "smooth") -> float:
    if variant == "smooth":
        return math.log((1.0 + n_docs) / 1.0) + 1.0
    raise ParameterError("raw idf is undefined for unseen tokens")


@dataclass
class W2vTfidfModel:
    """Word2vec + TF-IDF pooled document embedder."""

    vocab: Vocabulary
    word_vectors: np.ndarray  # |V| x d
    idf: np.ndarray  # per vocab index
    params: SgnsParams
    idf_variant: str = "smooth"

    @property
    def dim(self) -> int:
        return int(self.word_vectors.shape[1])

    def embed(self, text: str) -> np.ndarray:
        counts = Counter(t for t in tokenize(text) if t in self.vocab)
        if not counts:
            raise UndefinedEmbeddingError("no in-vocabulary token in text")
        acc = np.zeros(self.dim, dtype=np.float64)
        weight_sum = 0.0
        for token, tf in counts.items():
            i = self.vocab.index[token]
            w = tf * float(self.idf[i])
            acc += w * self.word_vectors[i].astype(np.float64)
            weight_sum += w
        return acc / weight_sum


def fit_w2v_tfidf(docs_tokens: list[list[str]], params: SgnsParams) -> W2vTfidfModel:
    """Train word vectors and the idf table over one corpus."""
    w2v = train_word2vec(docs_tokens, params)
    idf = compute_idf(w2v.vocab.doc_freq, w2v.vocab.n_docs)
    return W2vTfidfModel(vocab=w2v.vocab, word_vectors=w2v.vectors_in, idf=idf, params=params)
