"""Embedders backed by vectors produced outside this package.

Externally trained models (typically transformer sentence encoders)
cross the component boundary as PATSIM-VECS files.  To make such a file
usable wherever an Embedder is expected, entries meant for text lookup
are keyed by ``text_key(text)``, the SHA-256 hex digest of the UTF-8
text.  Exporters on the other side of the boundary apply the same
convention.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import UndefinedEmbeddingError
from ..seeds import stage_rng


def text_key(text: str) -> str:
    """Content address of a text for vector-file lookup."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class ExternalVectors:
    """id -> vector table of uniform dimensionality.

    Lookup of an unknown id raises UndefinedEmbeddingError; it never
    silently degrades to a zero vector.
    """

    vectors: dict[str, np.ndarray]
    dim: int
    source: str = "external"

    def lookup(self, vector_id: str) -> np.ndarray:
        try:
            return self.vectors[vector_id]
        except KeyError:
            raise UndefinedEmbeddingError(
                f"no vector for id {vector_id!r} in source {self.source!r}"
            ) from None

    def embed(self, text: str) -> np.ndarray:
        """Text lookup through the content-address convention."""
        key = text_key(text)
        if key not in self.vectors:
            raise UndefinedEmbeddingError(
                f"no vector for text key {key[:12]}... in source {self.source!r}"
            )
        return self.vectors[key]


@dataclass
class HashEmbedder:
    """Deterministic stand-in embedder: a seeded unit vector per text.

    Used to build and test the benchmark without any trained model; two
    instances with different salts embed the same text differently.
    """

    dim: int = 16
    salt: str = "stub"
    _cache: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def embed(self, text: str) -> np.ndarray:
        if text not in self._cache:
            seed = int.from_bytes(
                hashlib.sha256(f"{self.salt}\x1f{text}".encode("utf-8")).digest()[:8],
                "little",
            )
            v = stage_rng(seed, "hash-embed").standard_normal(self.dim)
            self._cache[text] = v / np.linalg.norm(v)
        return self._cache[text]


@dataclass
class FixedEmbedder:
    """Test helper: a hand-set text -> vector mapping."""

    table: dict[str, np.ndarray]

    def embed(self, text: str) -> np.ndarray:
        if text not in self.table:
            raise UndefinedEmbeddingError(f"no fixed vector for {text!r}")
        return self.table[text]
