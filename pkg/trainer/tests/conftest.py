"""Trainer test fixtures: a 200-triplet desk-scale job and a tiny base."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

os.environ.setdefault("HF_HUB_OFFLINE", "1")

TOPICS = {
    "search": ["query", "index", "ranking", "crawler", "cache", "token", "lookup",
               "snippet", "relevance", "corpus", "latency", "shard", "filter", "facet",
               "parser", "scoring"],
    "bio": ["protein", "peptide", "antibody", "ligand", "receptor", "dosage", "sequence",
            "binding", "assay", "therapeutic", "epitope", "serum", "enzyme", "clone",
            "antigen", "plasmid"],
}
NAMES = list(TOPICS)


def sentence(rng: np.random.Generator, topic: str, n: int = 10) -> str:
    return "A system comprising " + " ".join(rng.choice(TOPICS[topic], size=n)) + "."


def write_triplet_job(root: Path, n: int = 200, seed: int = 1) -> dict[str, Path]:
    """PATSIM-TRIPLETS file + 70/30 manifests with two-topic texts."""
    rng = np.random.default_rng(seed)
    lines = []
    for i in range(n):
        topic = NAMES[i % 2]
        other = NAMES[(i + 1) % 2]
        lines.append(
            "\t".join(
                (
                    f"a{i}", f"p{i}", f"n{i}",
                    sentence(rng, topic), sentence(rng, topic), sentence(rng, other),
                )
            )
        )
    root.mkdir(parents=True, exist_ok=True)
    triplets = root / "triplets.tsv"
    triplets.write_text(
        f"PATSIM-TRIPLETS v1\tcount={n}\tseed={seed}\n" + "\n".join(lines) + "\n",
        encoding="utf-8",
    )
    order = rng.permutation(n)
    n_train = int(0.7 * n)
    train = root / "train.idx"
    validation = root / "validation.idx"
    train.write_text("\n".join(str(i) for i in sorted(order[:n_train])) + "\n", encoding="utf-8")
    validation.write_text(
        "\n".join(str(i) for i in sorted(order[n_train:])) + "\n", encoding="utf-8"
    )
    return {"triplets": triplets, "train": train, "validation": validation}


@pytest.fixture(scope="session")
def job_files(tmp_path_factory) -> dict[str, Path]:
    return write_triplet_job(tmp_path_factory.mktemp("job"))


@pytest.fixture(scope="session")
def tiny_base(tmp_path_factory, job_files) -> Path:
    from patsim_trainer.formats import read_triplets
    from patsim_trainer.model import make_tiny_base

    triplets = read_triplets(job_files["triplets"])
    texts = [t for trip in triplets for t in (trip.anchor, trip.positive, trip.negative)]
    return make_tiny_base(texts, tmp_path_factory.mktemp("base") / "tiny", seed=0)
