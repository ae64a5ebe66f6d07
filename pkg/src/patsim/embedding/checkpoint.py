"""Binary checkpoints for the static models.

Layout (all integers little-endian):

    magic    8 bytes  b"PATSIMCK"
    version  u32      1
    kind     u8       1 = w2v-tfidf, 2 = dbow
    params   u32 length + UTF-8 JSON (hyperparameters, seed, idf variant)
    vocab    u32 min_count, u64 n_docs, u32 size,
             then per token: u32 byte length + UTF-8 bytes, u64 cf, u64 df
    matrices u32 dim, then row-major float32 blocks:
               kind 1: word vectors (|V| x d)
               kind 2: output word matrix (|V| x d),
                       u32 doc count, per doc u32 len + id bytes,
                       doc vectors (n x d)

The idf table of a w2v-tfidf model is recomputed from (df, n_docs) on
load, so it round-trips exactly.
"""

from __future__ import annotations

import json
import struct
from dataclasses import asdict

import numpy as np

from ..errors import FormatError
from .dbow import DbowModel, DbowParams
from .vocab import Vocabulary
from .word2vec import SgnsParams, W2vTfidfModel, compute_idf

MAGIC = b"PATSIMCK"
VERSION = 1
KIND_W2V_TFIDF = 1
KIND_DBOW = 2


def _write_bytes(fh, data: bytes) -> None:
    fh.write(struct.pack("<I", len(data)))
    fh.write(data)


def _read_exact(fh, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(f"checkpoint truncated: wanted {n} bytes, got {len(data)}")
    return data


def _read_bytes(fh) -> bytes:
    (n,) = struct.unpack("<I", _read_exact(fh, 4))
    return _read_exact(fh, n)


def _write_vocab(fh, vocab: Vocabulary) -> None:
    fh.write(struct.pack("<IQI", vocab.min_count, vocab.n_docs, len(vocab)))
    tokens = vocab.tokens()
    for i, token in enumerate(tokens):
        _write_bytes(fh, token.encode("utf-8"))
        fh.write(struct.pack("<QQ", vocab.corpus_freq[i], vocab.doc_freq[i]))


def _read_vocab(fh) -> Vocabulary:
    min_count, n_docs, size = struct.unpack("<IQI", _read_exact(fh, 16))
    index: dict[str, int] = {}
    cf, df = [], []
    for i in range(size):
        token = _read_bytes(fh).decode("utf-8")
        c, d = struct.unpack("<QQ", _read_exact(fh, 16))
        index[token] = i
        cf.append(c)
        df.append(d)
    return Vocabulary(index=index, corpus_freq=cf, doc_freq=df, min_count=min_count, n_docs=n_docs)


def _write_matrix(fh, m: np.ndarray) -> None:
    fh.write(np.ascontiguousarray(m, dtype="<f4").tobytes())


def _read_matrix(fh, rows: int, cols: int) -> np.ndarray:
    data = _read_exact(fh, rows * cols * 4)
    return np.frombuffer(data, dtype="<f4").reshape(rows, cols).copy()


def save_w2v_tfidf(model: W2vTfidfModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IB", VERSION, KIND_W2V_TFIDF))
        params = dict(asdict(model.params), idf_variant=model.idf_variant)
        _write_bytes(fh, json.dumps(params, sort_keys=True).encode("utf-8"))
        _write_vocab(fh, model.vocab)
        fh.write(struct.pack("<I", model.dim))
        _write_matrix(fh, model.word_vectors)


def save_dbow(model: DbowModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IB", VERSION, KIND_DBOW))
        _write_bytes(fh, json.dumps(asdict(model.params), sort_keys=True).encode("utf-8"))
        _write_vocab(fh, model.vocab)
        fh.write(struct.pack("<I", model.dim))
        _write_matrix(fh, model.word_out)
        fh.write(struct.pack("<I", len(model.doc_ids)))
        for doc_id in model.doc_ids:
            _write_bytes(fh, doc_id.encode("utf-8"))
        _write_matrix(fh, model.doc_vectors)


def _read_header(fh) -> int:
    magic = _read_exact(fh, 8)
    if magic != MAGIC:
        raise FormatError(f"not a patsim checkpoint (magic {magic!r})")
    version, kind = struct.unpack("<IB", _read_exact(fh, 5))
    if version != VERSION:
        raise FormatError(f"unsupported checkpoint version {version}")
    return kind


def load_checkpoint(path):
    """Load either model kind; returns W2vTfidfModel or DbowModel."""
    with open(path, "rb") as fh:
        kind = _read_header(fh)
        params = json.loads(_read_bytes(fh).decode("utf-8"))
        vocab = _read_vocab(fh)
        (dim,) = struct.unpack("<I", _read_exact(fh, 4))
        if kind == KIND_W2V_TFIDF:
            idf_variant = params.pop("idf_variant", "smooth")
            word_vectors = _read_matrix(fh, len(vocab), dim)
            idf = compute_idf(vocab.doc_freq, vocab.n_docs, idf_variant)
            return W2vTfidfModel(
                vocab=vocab,
                word_vectors=word_vectors,
                idf=idf,
                params=SgnsParams(**params),
                idf_variant=idf_variant,
            )
        if kind == KIND_DBOW:
            word_out = _read_matrix(fh, len(vocab), dim)
            (n_docs,) = struct.unpack("<I", _read_exact(fh, 4))
            doc_ids = [_read_bytes(fh).decode("utf-8") for _ in range(n_docs)]
            doc_vectors = _read_matrix(fh, n_docs, dim)
            return DbowModel(
                vocab=vocab,
                doc_ids=doc_ids,
                doc_vectors=doc_vectors,
                word_out=word_out,
                params=DbowParams(**params),
            )
        raise FormatError(f"unknown checkpoint kind {kind}")
