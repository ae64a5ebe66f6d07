"""Boundary file formats.

The trainer talks to the similarity pipeline through files alone:
PATSIM-TRIPLETS and PATSIM-BENCH in, PATSIM-VECS out.  The small
readers/writers here mirror the published format contracts; vector
files meant for text lookup are keyed by the SHA-256 hex digest of the
UTF-8 text, the shared convention on both sides of the boundary.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class BoundaryFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def text_key(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TripletTexts:
    anchor: str
    positive: str
    negative: str


def read_triplets(path) -> list[TripletTexts]:
    triplets: list[TripletTexts] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[0] != "PATSIM-TRIPLETS v1":
            raise BoundaryFormatError(f"not a triplet file: {header[0]!r}", line=1)
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 6:
                raise BoundaryFormatError(f"expected 6 fields, got {len(parts)}", line=lineno)
            triplets.append(TripletTexts(anchor=parts[3], positive=parts[4], negative=parts[5]))
    return triplets


def read_manifest(path) -> list[int]:
    with open(path, "r", encoding="utf-8") as fh:
        return [int(line) for line in fh if line.strip()]


def read_bench_claims(path) -> list[tuple[str, str]]:
    """Unique claim texts of a benchmark file as (text_key, text) pairs."""
    seen: set[str] = set()
    out: list[tuple[str, str]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[0] != "PATSIM-BENCH v1":
            raise BoundaryFormatError(f"not a benchmark file: {header[0]!r}", line=1)
        for lineno, line in enumerate(fh, start=2):
            stripped = line.rstrip("\n")
            if stripped in ("[TRUE]", "[RANDOM]"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 8:
                raise BoundaryFormatError(f"expected 8 fields, got {len(parts)}", line=lineno)
            for text in parts[6:8]:
                if text not in seen:
                    seen.add(text)
                    out.append((text_key(text), text))
    return out


def read_texts_tsv(path) -> list[tuple[str, str]]:
    """id<TAB>text lines."""
    out: list[tuple[str, str]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise BoundaryFormatError("expected id<TAB>text", line=lineno)
            text_id, text = line.split("\t", 1)
            out.append((text_id, text))
    return out


def write_vectors(entries, path, source: str) -> None:
    """PATSIM-VECS v1 writer; duplicate ids fail before any write."""
    rows = list(entries)
    if not rows:
        raise BoundaryFormatError("refusing to write an empty vector file")
    ids = [vector_id for vector_id, _ in rows]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise BoundaryFormatError(f"duplicate vector id {dup!r}")
    dims = {int(np.asarray(v).shape[0]) for _, v in rows}
    if len(dims) != 1:
        raise BoundaryFormatError(f"mixed vector dims {sorted(dims)}")
    (dim,) = dims
    if " " in source or "\t" in source:
        raise BoundaryFormatError("source label must not contain whitespace")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"PATSIM-VECS v1 dim={dim} count={len(rows)} source={source}\n")
        for vector_id, vec in rows:
            values = "\t".join("%.10e" % x for x in np.asarray(vec, dtype=np.float64))
            fh.write(f"{vector_id}\t{values}\n")
