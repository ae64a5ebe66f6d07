"""Vocabulary over tokenized documents.

Tokens below the corpus-frequency threshold are discarded; surviving
tokens get dense indices in [0, |V|) ordered by descending corpus
frequency (ties broken alphabetically) so the index assignment is
deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..errors import TrainingError


@dataclass
class Vocabulary:
    index: dict[str, int]
    corpus_freq: list[int]  # per index
    doc_freq: list[int]  # per index
    min_count: int
    n_docs: int

    def __len__(self) -> int:
        return len(self.index)

    def tokens(self) -> list[str]:
        out = [""] * len(self.index)
        for tok, i in self.index.items():
            out[i] = tok
        return out

    def __contains__(self, token: str) -> bool:
        return token in self.index


def build_vocabulary(docs_tokens, min_count: int = 1) -> Vocabulary:
    """Count corpus and document frequencies and assign dense indices."""
    cf: Counter = Counter()
    df: Counter = Counter()
    n_docs = 0
    for tokens in docs_tokens:
        n_docs += 1
        cf.update(tokens)
        df.update(set(tokens))
    kept = sorted((t for t, c in cf.items() if c >= min_count), key=lambda t: (-cf[t], t))
    if not kept:
        raise TrainingError(f"empty vocabulary: no token reaches min_count={min_count}")
    index = {t: i for i, t in enumerate(kept)}
    return Vocabulary(
        index=index,
        corpus_freq=[cf[t] for t in kept],
        doc_freq=[df[t] for t in kept],
        min_count=min_count,
        n_docs=n_docs,
    )
