"""Paragraph vectors, distributed bag of words (PV-DBOW).

Each document owns a trainable vector that predicts the document's
sampled words through the same negative-sampling objective as word2vec,
with the document vector standing in for the center word.  Unseen texts
are embedded by inference: a fresh vector is trained for a few epochs
against the frozen output word matrix.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError, UndefinedEmbeddingError
from ..seeds import stage_rng
from .sgns import NegativeSampler, center_step
from .text import tokenize
from .vocab import Vocabulary, build_vocabulary


@dataclass(frozen=True)
class DbowParams:
    dim: int = 300
    negatives: int = 5
    epochs: int = 10
    lr_initial: float = 0.025
    lr_final: float = 0.0001
    min_count: int = 5
    inference_epochs: int = 10
    seed: int = 1

    def validate(self) -> None:
        if self.dim < 1 or self.negatives < 1 or self.epochs < 0 or self.inference_epochs < 0:
            raise ParameterError(f"invalid DBOW parameters: {self}")


@dataclass
class DbowModel:
    vocab: Vocabulary
    doc_ids: list[str]
    doc_vectors: np.ndarray  # n_docs x d
    word_out: np.ndarray  # |V| x d output matrix, frozen at inference
    params: DbowParams
    skipped_empty: int = 0
    epoch_losses: list[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return int(self.doc_vectors.shape[1])

    def doc_vector(self, doc_id: str) -> np.ndarray:
        return self.doc_vectors[self.doc_ids.index(doc_id)]

    def embed(self, text: str) -> np.ndarray:
        """Infer a vector for arbitrary text; deterministic per text."""
        text_seed = int.from_bytes(
            hashlib.sha256(text.encode("utf-8")).digest()[:8], "little"
        )
        vec = infer_dbow(self, text, self.params.inference_epochs, seed=text_seed)
        return vec.astype(np.float64)


def _doc_targets(vocab: Vocabulary, tokens: list[str]) -> np.ndarray:
    return np.array([vocab.index[t] for t in tokens if t in vocab], dtype=np.int64)


def train_dbow(docs: list[tuple[str, list[str]]], params: DbowParams) -> DbowModel:
    """Train document vectors over (doc_id, tokens) pairs.

    Documents with zero tokens are skipped (counted) but still get a
    seeded initial vector so every training document resolves.
    """
    params.validate()
    vocab = build_vocabulary((toks for _, toks in docs), min_count=params.min_count)
    n = len(docs)
    rng_init = stage_rng(params.seed, "dbow-init")
    doc_vectors = ((rng_init.random((n, params.dim)) - 0.5) / params.dim).astype(np.float32)
    word_out = np.zeros((len(vocab), params.dim), dtype=np.float32)

    targets = [_doc_targets(vocab, toks) for _, toks in docs]
    skipped = sum(1 for _, toks in docs if not toks)
    sampler = NegativeSampler.from_frequencies(vocab.corpus_freq)
    rng_train = stage_rng(params.seed, "dbow-train")

    model = DbowModel(
        vocab=vocab,
        doc_ids=[doc_id for doc_id, _ in docs],
        doc_vectors=doc_vectors,
        word_out=word_out,
        params=params,
        skipped_empty=skipped,
    )
    total_steps = params.epochs * sum(1 for t in targets if t.shape[0] > 0)
    step = 0
    for _ in range(params.epochs):
        epoch_loss = 0.0
        epoch_samples = 0
        for d in range(n):
            t = targets[d]
            if t.shape[0] == 0:
                continue
            lr = params.lr_initial + (params.lr_final - params.lr_initial) * (
                step / max(1, total_steps - 1)
            )
            step += 1
            negs = sampler.draw(rng_train, (t.shape[0], params.negatives))
            epoch_loss += center_step(doc_vectors[d], word_out, t, negs, lr)
            epoch_samples += t.shape[0]
        if epoch_samples:
            model.epoch_losses.append(epoch_loss / epoch_samples)
    return model


def infer_dbow(model: DbowModel, text: str, inference_epochs: int, seed: int) -> np.ndarray:
    """Train a fresh document vector against the frozen word matrix."""
    if inference_epochs < 0:
        raise ParameterError("inference_epochs must be >= 0")
    tokens = tokenize(text)
    t = _doc_targets(model.vocab, tokens)
    if t.shape[0] == 0:
        raise UndefinedEmbeddingError("no in-vocabulary token in text")
    rng = stage_rng(seed, "dbow-infer")
    vec = ((rng.random(model.params.dim) - 0.5) / model.params.dim).astype(np.float32)
    sampler = NegativeSampler.from_frequencies(model.vocab.corpus_freq)
    p = model.params
    for e in range(inference_epochs):
        lr = p.lr_initial + (p.lr_final - p.lr_initial) * (e / max(1, inference_epochs - 1))
        negs = sampler.draw(rng, (t.shape[0], p.negatives))
        center_step(vec, model.word_out, t, negs, lr, update_out=False)
    return vec
