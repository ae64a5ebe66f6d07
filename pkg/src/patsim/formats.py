"""Readers and writers for the artifact's file formats.

All formats are UTF-8 text, one record per line, tab-separated, with a
versioned first line.  Free text fields are tab-free by the ingest
normalization contract, and each writer re-checks that before emitting.

    PATSIM-CORPUS v1 <TAB> count=<n>
        patent_id, filing_date, cpc_full_symbol, abstract

    PATSIM-TRIPLETS v1 <TAB> count=<n> <TAB> seed=<s>
        anchor_id, positive_id, negative_id,
        anchor_text, positive_text, negative_text

    PATSIM-BENCH v1 <TAB> true=<n> <TAB> random=<m> <TAB> seed=<s> <TAB> reference=<label>
        [TRUE] / [RANDOM] section markers, then per pair:
        interference_no, patent_id_a, seq_a, patent_id_b, seq_b,
        selection_score, claim_a_text, claim_b_text

    PATSIM-VECS v1 dim=<d> count=<n> source=<label>   (space-separated header)
        id, then d decimal floats

Vector files indexed by text use ``text_key`` (SHA-256 hex of the UTF-8
text) as the id; that convention is what lets a vector file act as an
embedder.
"""

from __future__ import annotations

import json
from datetime import date
from typing import Iterable

import numpy as np

from .bench import BenchmarkDataset, ClaimPair
from .errors import FormatError
from .ingest import (
    AssignmentType,
    ClaimRecord,
    PatentCorpus,
    PatentRecord,
    PatentType,
    parse_cpc_symbol,
)
from .triplets import Triplet, TripletSplit
from .embedding.external import ExternalVectors

CORPUS_MAGIC = "PATSIM-CORPUS v1"
TRIPLETS_MAGIC = "PATSIM-TRIPLETS v1"
BENCH_MAGIC = "PATSIM-BENCH v1"
VECS_MAGIC = "PATSIM-VECS v1"

FLOAT_FMT = "%.10e"


def _no_tabs(text: str, what: str) -> str:
    if "\t" in text or "\n" in text:
        raise FormatError(f"{what} contains a tab or newline; normalize at ingest")
    return text


def _header_fields(line: str, magic: str, sep: str) -> dict[str, str]:
    parts = line.rstrip("\n").split(sep)
    head = sep.join(parts[: len(magic.split(sep))])
    if head != magic:
        raise FormatError(f"expected header {magic!r}, got {line.rstrip()!r}", line=1)
    fields = {}
    for part in parts[len(magic.split(sep)) :]:
        if "=" not in part:
            raise FormatError(f"malformed header field {part!r}", line=1)
        key, value = part.split("=", 1)
        fields[key] = value
    return fields


# ---------------------------------------------------------------------------
# Corpus


def write_corpus(corpus: PatentCorpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{CORPUS_MAGIC}\tcount={len(corpus)}\n")
        for patent_id in sorted(corpus.records):
            r = corpus.records[patent_id]
            fh.write(
                "\t".join(
                    (
                        patent_id,
                        r.filing_date.isoformat(),
                        r.cpc_full_symbol,
                        _no_tabs(r.abstract, f"abstract of {patent_id}"),
                    )
                )
                + "\n"
            )


def read_corpus(path) -> PatentCorpus:
    records: dict[str, PatentRecord] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = _header_fields(fh.readline(), CORPUS_MAGIC, "\t")
        count = int(header["count"])
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 4:
                raise FormatError(f"expected 4 fields, got {len(parts)}", line=lineno)
            patent_id, filed, symbol, abstract = parts
            if patent_id in records:
                raise FormatError(f"duplicate patent id {patent_id!r}", line=lineno)
            records[patent_id] = PatentRecord(
                patent_id=patent_id,
                filing_date=date.fromisoformat(filed),
                abstract=abstract,
                patent_type=PatentType.UTILITY,
                cpc=(parse_cpc_symbol(patent_id, symbol, AssignmentType.INVENTIONAL),),
            )
    if len(records) != count:
        raise FormatError(f"header count={count} but file holds {len(records)} records")
    return PatentCorpus(records=records)


# ---------------------------------------------------------------------------
# Triplets and split manifests


def write_triplets(triplets: list[Triplet], seed: int, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{TRIPLETS_MAGIC}\tcount={len(triplets)}\tseed={seed}\n")
        for t in triplets:
            fh.write(
                "\t".join(
                    (
                        t.anchor_id,
                        t.positive_id,
                        t.negative_id,
                        _no_tabs(t.anchor_text, "anchor text"),
                        _no_tabs(t.positive_text, "positive text"),
                        _no_tabs(t.negative_text, "negative text"),
                    )
                )
                + "\n"
            )


def read_triplets(path) -> tuple[list[Triplet], int]:
    triplets: list[Triplet] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = _header_fields(fh.readline(), TRIPLETS_MAGIC, "\t")
        count = int(header["count"])
        seed = int(header["seed"])
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 6:
                raise FormatError(f"expected 6 fields, got {len(parts)}", line=lineno)
            triplets.append(Triplet(*parts))
    if len(triplets) != count:
        raise FormatError(f"header count={count} but file holds {len(triplets)} triplets")
    return triplets, seed


def write_split_manifests(
    split: TripletSplit,
    triplet_order: list[Triplet],
    train_path,
    validation_path,
    meta_path,
) -> None:
    """Write line-index manifests (0-based into the triplet file order)."""
    position = {t: i for i, t in enumerate(triplet_order)}
    for subset, path in ((split.train, train_path), (split.validation, validation_path)):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for t in subset:
                fh.write(f"{position[t]}\n")
    meta = {
        "counts": {
            "total": len(triplet_order),
            "sampled": len(split.train) + len(split.validation),
            "train": len(split.train),
            "validation": len(split.validation),
        },
        "fractions": list(split.fractions),
        "seed": split.seed,
    }
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_manifest(path) -> list[int]:
    with open(path, "r", encoding="utf-8") as fh:
        return [int(line) for line in fh if line.strip()]


# ---------------------------------------------------------------------------
# Benchmark


def _write_pair(fh, pair: ClaimPair) -> None:
    fh.write(
        "\t".join(
            (
                pair.interference_no,
                pair.claim_a.patent_id,
                str(pair.claim_a.claim_sequence),
                pair.claim_b.patent_id,
                str(pair.claim_b.claim_sequence),
                FLOAT_FMT % pair.selection_score,
                _no_tabs(pair.claim_a.text, "claim text"),
                _no_tabs(pair.claim_b.text, "claim text"),
            )
        )
        + "\n"
    )


def _parse_pair(parts: list[str], lineno: int) -> ClaimPair:
    if len(parts) != 8:
        raise FormatError(f"expected 8 fields, got {len(parts)}", line=lineno)
    no, id_a, seq_a, id_b, seq_b, score, text_a, text_b = parts
    return ClaimPair(
        interference_no=no,
        claim_a=ClaimRecord(id_a, int(seq_a), text_a, True),
        claim_b=ClaimRecord(id_b, int(seq_b), text_b, True),
        selection_score=float(score),
    )


def write_benchmark(dataset: BenchmarkDataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            f"{BENCH_MAGIC}\ttrue={len(dataset.true_pairs)}"
            f"\trandom={len(dataset.random_pairs)}"
            f"\tseed={dataset.seed}\treference={dataset.reference_label}\n"
        )
        fh.write("[TRUE]\n")
        for pair in dataset.true_pairs:
            _write_pair(fh, pair)
        fh.write("[RANDOM]\n")
        for pair in dataset.random_pairs:
            _write_pair(fh, pair)


def read_benchmark(path) -> BenchmarkDataset:
    true_pairs: list[ClaimPair] = []
    random_pairs: list[ClaimPair] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = _header_fields(fh.readline(), BENCH_MAGIC, "\t")
        section: list[ClaimPair] | None = None
        for lineno, line in enumerate(fh, start=2):
            stripped = line.rstrip("\n")
            if stripped == "[TRUE]":
                section = true_pairs
                continue
            if stripped == "[RANDOM]":
                section = random_pairs
                continue
            if section is None:
                raise FormatError("pair record before any section marker", line=lineno)
            section.append(_parse_pair(stripped.split("\t"), lineno))
    if len(true_pairs) != int(header["true"]) or len(random_pairs) != int(header["random"]):
        raise FormatError("benchmark section sizes disagree with header counts")
    return BenchmarkDataset(
        true_pairs=true_pairs,
        random_pairs=random_pairs,
        seed=int(header["seed"]),
        reference_label=header.get("reference", "unknown"),
    )


# ---------------------------------------------------------------------------
# Vector files


def write_vectors(entries: Iterable[tuple[str, np.ndarray]], path, source: str) -> None:
    """Write a PATSIM-VECS file; entries are (id, vector) with uniform dim."""
    rows = list(entries)
    seen: set[str] = set()
    dim = None
    for vector_id, vec in rows:
        if vector_id in seen:
            raise FormatError(f"duplicate vector id {vector_id!r}")
        seen.add(vector_id)
        v = np.asarray(vec)
        if dim is None:
            dim = int(v.shape[0])
        elif int(v.shape[0]) != dim:
            raise FormatError(f"vector id {vector_id!r} has dim {v.shape[0]}, expected {dim}")
    if dim is None:
        raise FormatError("refusing to write an empty vector file")
    if " " in source or "\t" in source:
        raise FormatError(f"vector source label {source!r} must not contain whitespace")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{VECS_MAGIC} dim={dim} count={len(rows)} source={source}\n")
        for vector_id, vec in rows:
            values = "\t".join(FLOAT_FMT % x for x in np.asarray(vec, dtype=np.float64))
            fh.write(f"{_no_tabs(vector_id, 'vector id')}\t{values}\n")


def read_vectors(path) -> ExternalVectors:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = _header_fields(fh.readline(), VECS_MAGIC, " ")
        dim = int(header["dim"])
        count = int(header["count"])
        source = header.get("source", "external")
        table: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != dim + 1:
                raise FormatError(
                    f"expected id + {dim} values, got {len(parts) - 1} values", line=lineno
                )
            vector_id = parts[0]
            if vector_id in table:
                raise FormatError(f"duplicate vector id {vector_id!r}", line=lineno)
            try:
                table[vector_id] = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise FormatError("non-numeric vector component", line=lineno) from None
    if len(table) != count:
        raise FormatError(f"header count={count} but file holds {len(table)} vectors")
    return ExternalVectors(vectors=table, dim=dim, source=source)


# ---------------------------------------------------------------------------
# Provenance reports


def write_provenance(counters: dict[str, int | float], path, prefix: str = "") -> None:
    """Flat key=value report, keys sorted for byte stability.

    Counter values are integers; summary statistics may be floats and
    are written with a fixed six-decimal format.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(counters):
            value = counters[key]
            rendered = f"{value:.6f}" if isinstance(value, float) else str(value)
            fh.write(f"{prefix}{key}={rendered}\n")


def read_provenance(path) -> dict[str, int | float]:
    out: dict[str, int | float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            key, value = line.split("=", 1)
            out[key] = float(value) if "." in value else int(value)
    return out
