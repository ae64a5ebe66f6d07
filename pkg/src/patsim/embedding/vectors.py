"""Dense vector checks and cosine similarity."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionMismatchError, UndefinedSimilarityError


def ensure_vector(values, dim: int | None = None) -> np.ndarray:
    """Validate a dense vector: 1-D, finite entries, optional fixed dim."""
    v = np.asarray(values)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"expected dim {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise UndefinedSimilarityError("vector contains non-finite entries")
    return v


def cosine(a, b) -> float:
    """Cosine similarity dot(a,b)/(|a||b|) in [-1, 1].

    The same array against itself scores exactly 1.0 (sqrt rounding
    would otherwise miss by an ulp), and results are clamped to the
    closed interval.  Symmetry is bitwise exact: both orders traverse
    the products identically.  Raises DimensionMismatchError on unequal
    dims and UndefinedSimilarityError when either vector has zero norm
    or non-finite entries.
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.ndim != 1 or bv.ndim != 1:
        raise DimensionMismatchError(f"expected 1-D vectors, got {av.shape} and {bv.shape}")
    if av.shape[0] != bv.shape[0]:
        raise DimensionMismatchError(f"cosine dims differ: {av.shape[0]} vs {bv.shape[0]}")
    na2 = float(av @ av)
    nb2 = float(bv @ bv)
    if na2 == 0.0 or nb2 == 0.0:
        raise UndefinedSimilarityError("cosine is undefined for a zero vector")
    dot = float(av @ bv)
    denom2 = na2 * nb2
    if not (math.isfinite(dot) and math.isfinite(denom2)):
        raise UndefinedSimilarityError("vector contains non-finite entries")
    if a is b:
        return 1.0
    return min(1.0, max(-1.0, dot / math.sqrt(denom2)))
