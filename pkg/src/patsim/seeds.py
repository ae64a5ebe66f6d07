"""Deterministic seed derivation.

A single master seed fans out to per-stage streams by hashing
``(master, stage label)`` with SHA-256, so stages can be re-run
independently and still reproduce byte-identical output.  Per-item
streams (one RNG per pair index, per text, ...) use the counter-based
Philox generator keyed by the stage and positioned at the item index,
which makes parallel and serial execution bit-identical.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _digest(master_seed: int, *labels) -> bytes:
    h = hashlib.sha256()
    h.update(str(int(master_seed)).encode("ascii"))
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode("utf-8"))
    return h.digest()


def stage_seed(master_seed: int, *labels) -> int:
    """64-bit stage seed derived from the master seed and labels."""
    return int.from_bytes(_digest(master_seed, *labels)[:8], "little")


def stage_key(master_seed: int, *labels) -> np.ndarray:
    """128-bit Philox key (two uint64 words) for a named stage."""
    d = _digest(master_seed, *labels)
    return np.frombuffer(d[:16], dtype=np.uint64).copy()


def stage_rng(master_seed: int, *labels) -> np.random.Generator:
    """Generator for a whole stage (sampling, splitting, shuffles)."""
    return np.random.Generator(np.random.Philox(key=stage_key(master_seed, *labels)))


def item_rng(master_seed: int, stage: str, index: int) -> np.random.Generator:
    """Generator for one item of a stage, independent of all others.

    The Philox counter is positioned at a per-index offset, so any
    subset of items can be computed in any order (or in parallel) and
    still draw exactly the values a serial run would.
    """
    bg = np.random.Philox(counter=int(index) << 192, key=stage_key(master_seed, stage))
    return np.random.Generator(bg)
