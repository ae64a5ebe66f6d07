"""Embedding interface, tokenizer, cosine, and the static models.

An *embedder* is any object with ``embed(text: str) -> np.ndarray``
returning a fixed-dimension dense vector; the same text always maps to
the same vector.  Implementations here: W2vTfidfModel (word2vec + TF-IDF
pooling), DbowModel (paragraph vectors via inference), ExternalVectors
(pre-computed vector files) and HashEmbedder (deterministic stub).
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np

from .contract import TripletLossConfig
from .dbow import DbowModel, DbowParams, infer_dbow, train_dbow
from .external import ExternalVectors, FixedEmbedder, HashEmbedder, text_key
from .sgns import NegativeSampler, center_step, sgns_grads, sgns_loss
from .text import normalize_text, tokenize
from .vectors import cosine, ensure_vector
from .vocab import Vocabulary, build_vocabulary
from .word2vec import (
    SgnsParams,
    W2vTfidfModel,
    Word2vecModel,
    compute_idf,
    fit_w2v_tfidf,
    idf_for_unseen,
    train_word2vec,
)


@runtime_checkable
class Embedder(Protocol):
    def embed(self, text: str) -> np.ndarray: ...


__all__ = [
    "DbowModel",
    "DbowParams",
    "Embedder",
    "ExternalVectors",
    "FixedEmbedder",
    "HashEmbedder",
    "NegativeSampler",
    "SgnsParams",
    "TripletLossConfig",
    "Vocabulary",
    "W2vTfidfModel",
    "Word2vecModel",
    "build_vocabulary",
    "center_step",
    "compute_idf",
    "cosine",
    "ensure_vector",
    "fit_w2v_tfidf",
    "idf_for_unseen",
    "infer_dbow",
    "normalize_text",
    "sgns_grads",
    "sgns_loss",
    "text_key",
    "tokenize",
    "train_dbow",
    "train_word2vec",
]
