"""Triplet dataset construction from the clean corpus.

Patents are grouped by (CPC full symbol, filing year); groups of one
are deleted.  All within-group unordered pairs become (anchor, positive)
couples, except continuations (string-equal abstracts), which are
skipped and counted.  Each pair then draws one negative uniformly from
the patents outside the anchor's CPC full symbol, via a per-pair
counter-based RNG stream so parallel and serial runs are bit-identical.
"""

from __future__ import annotations

from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ParameterError, UnsatisfiableNegativeError
from .ingest import PatentCorpus
from .seeds import item_rng, stage_rng

NEGATIVE_STAGE = "triplets:negatives"
SAMPLE_STAGE = "triplets:sample"
SPLIT_STAGE = "triplets:split"


@dataclass(frozen=True, order=True)
class GroupKey:
    cpc_full_symbol: str
    filing_year: int


@dataclass(frozen=True)
class Triplet:
    anchor_id: str
    positive_id: str
    negative_id: str
    anchor_text: str
    positive_text: str
    negative_text: str


@dataclass
class TripletSplit:
    train: list[Triplet]
    validation: list[Triplet]
    seed: int
    fractions: tuple[float, float]


def group_corpus(corpus: PatentCorpus) -> dict[GroupKey, list[str]]:
    """Group patent ids by (CPC full symbol, filing year); drop singletons."""
    groups: dict[GroupKey, list[str]] = {}
    for patent_id, record in corpus.records.items():
        key = GroupKey(record.cpc_full_symbol, record.filing_year)
        groups.setdefault(key, []).append(patent_id)
    return {k: sorted(groups[k]) for k in sorted(groups) if len(groups[k]) >= 2}


@dataclass
class PairCounters:
    pairs_total: int = 0
    continuation_excluded: int = 0
    yielded: int = 0


class PairStream:
    """Lazy enumeration of within-group (anchor, positive) pairs.

    Pairs are emitted in canonical order (groups sorted by key, ids
    sorted, smaller id first within a pair) so enumeration order, and
    with it every pair's index, is deterministic.
    """

    def __init__(self, groups: dict[GroupKey, list[str]], corpus: PatentCorpus):
        self._groups = groups
        self._corpus = corpus
        self.counters = PairCounters()

    def __iter__(self) -> Iterator[tuple[str, str]]:
        records = self._corpus.records
        for key in sorted(self._groups):
            ids = sorted(self._groups[key])
            for i in range(len(ids)):
                for j in range(i + 1, len(ids)):
                    self.counters.pairs_total += 1
                    if records[ids[i]].abstract == records[ids[j]].abstract:
                        self.counters.continuation_excluded += 1
                        continue
                    self.counters.yielded += 1
                    yield ids[i], ids[j]


def enumerate_pairs(groups: dict[GroupKey, list[str]], corpus: PatentCorpus) -> PairStream:
    return PairStream(groups, corpus)


class _NegativeIndex:
    """Uniform draw over patents outside a given CPC full symbol.

    Patent ids are held in one sorted list; per symbol we keep the
    sorted positions of its members, so the k-th eligible patent (k
    drawn uniformly) is recovered exactly with a bisect walk instead of
    rejection sampling.
    """

    def __init__(self, corpus: PatentCorpus):
        self.ids = sorted(corpus.records)
        self.positions_by_symbol: dict[str, list[int]] = {}
        for pos, patent_id in enumerate(self.ids):
            symbol = corpus.records[patent_id].cpc_full_symbol
            self.positions_by_symbol.setdefault(symbol, []).append(pos)

    def draw(self, rng, exclude_symbol: str) -> str:
        excluded = self.positions_by_symbol.get(exclude_symbol, [])
        eligible = len(self.ids) - len(excluded)
        if eligible == 0:
            raise UnsatisfiableNegativeError(
                f"every patent shares CPC symbol {exclude_symbol!r}; no negative exists"
            )
        k = int(rng.integers(eligible))
        # position of the k-th index not present in `excluded`
        pos = k
        while True:
            shifted = k + bisect_right(excluded, pos)
            if shifted == pos:
                return self.ids[pos]
            pos = shifted


def attach_negatives(
    pairs: Iterable[tuple[str, str]],
    corpus: PatentCorpus,
    seed: int,
    workers: int = 1,
) -> Iterator[Triplet]:
    """Attach one random negative per pair.

    The RNG stream of pair i is derived from (seed, stage, i), so the
    result for any pair is independent of every other pair and of the
    execution schedule; with a fixed seed the output sequence is
    identical run to run.
    """
    index = _NegativeIndex(corpus)
    records = corpus.records

    def build(i: int, anchor_id: str, positive_id: str) -> Triplet:
        anchor = records[anchor_id]
        rng = item_rng(seed, NEGATIVE_STAGE, i)
        negative_id = index.draw(rng, anchor.cpc_full_symbol)
        return Triplet(
            anchor_id=anchor_id,
            positive_id=positive_id,
            negative_id=negative_id,
            anchor_text=anchor.abstract,
            positive_text=records[positive_id].abstract,
            negative_text=records[negative_id].abstract,
        )

    if workers <= 1:
        for i, (a, p) in enumerate(pairs):
            yield build(i, a, p)
        return
    indexed = list(enumerate(pairs))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda item: build(item[0], *item[1]), indexed)


def sample_and_split(
    triplets: list[Triplet],
    sample_fraction: float,
    split: tuple[float, float],
    seed: int,
) -> TripletSplit:
    """Uniform sample without replacement, then a disjoint train/validation split.

    floor(fraction * n) triplets are sampled; of those, floor(train
    fraction * m) go to train and the rest to validation.  Deterministic
    under a fixed seed.
    """
    if not (0.0 < sample_fraction <= 1.0):
        raise ParameterError(f"sample fraction {sample_fraction} outside (0, 1]")
    if not all(0.0 < f <= 1.0 for f in split) or abs(sum(split) - 1.0) > 1e-9:
        raise ParameterError(f"split fractions {split} must lie in (0, 1] and sum to 1")

    n = len(triplets)
    m = int(sample_fraction * n + 1e-9)  # floor, robust to 0.29*100 == 28.999...
    sample_rng = stage_rng(seed, SAMPLE_STAGE)
    chosen = sorted(sample_rng.choice(n, size=m, replace=False).tolist())
    sampled = [triplets[i] for i in chosen]

    split_rng = stage_rng(seed, SPLIT_STAGE)
    order = split_rng.permutation(m)
    n_train = int(split[0] * m + 1e-9)
    train_idx = sorted(order[:n_train].tolist())
    val_idx = sorted(order[n_train:].tolist())
    return TripletSplit(
        train=[sampled[i] for i in train_idx],
        validation=[sampled[i] for i in val_idx],
        seed=seed,
        fractions=split,
    )
