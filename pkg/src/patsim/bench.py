"""Interference ground-truth benchmark construction.

An interference links two patent applications whose claims were judged
to cover the same invention, so the most similar cross-application
claim pair is a maximum-similarity ground truth.  Cases are filtered to
a filing-year window with exactly two applications and usable
independent claims on both sides; within each case, all cross
application claim combinations are scored by a reference embedder and
the argmax pair is kept.  A same-sized control set pairs claims across
different interferences at random.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from datetime import date

from .embedding import Embedder, cosine
from .errors import IngestConflictError, ParameterError, SelectionError
from .ingest import ClaimRecord, ColumnMap, TableReader, TableSchema
from .seeds import item_rng

RANDOM_PAIR_STAGE = "bench:random-pairs"

CANCELLED_MARKERS = ("canceled", "cancelled")


def _parse_filing_year(raw: str) -> int:
    """Filing year from a bare year or an ISO date."""
    raw = raw.strip()
    if raw.isdigit() and len(raw) == 4:
        return int(raw)
    return date.fromisoformat(raw).year


def case_schema(cols: ColumnMap) -> TableSchema:
    return TableSchema(
        "cases",
        (
            (cols.case_interference_no, str.strip),
            (cols.case_application_id, str.strip),
            (cols.case_filing_date, _parse_filing_year),
        ),
    )


def parse_case_rows(lines, cols: ColumnMap | None = None, delimiter: str = "\t") -> TableReader:
    """Stream (interference_no, application_id, filing_year) rows.

    The published interference tables come tab- or comma-separated, one
    row per involved application; the delimiter is configurable and no
    quoting is assumed.
    """
    return TableReader(lines, case_schema(cols or ColumnMap()), delimiter)


@dataclass(frozen=True)
class InterferenceCase:
    interference_no: str
    application_ids: tuple[str, str]
    filing_years: tuple[int, int]


@dataclass(frozen=True)
class ClaimPair:
    interference_no: str
    claim_a: ClaimRecord
    claim_b: ClaimRecord
    selection_score: float


@dataclass
class BenchmarkDataset:
    true_pairs: list[ClaimPair]
    random_pairs: list[ClaimPair]
    seed: int
    reference_label: str = "stub"
    provenance: dict[str, int | float] | None = None

    def selection_score_stats(self) -> dict[str, float]:
        """Distribution of the reference scores behind pair selection.

        The same reference embedder both selects pairs and may later be
        evaluated on them; publishing the selection scores keeps that
        potential bias visible instead of buried.
        """
        scores = [p.selection_score for p in self.true_pairs]
        if not scores:
            return {}
        return {
            "selection_score_mean": float(sum(scores) / len(scores)),
            "selection_score_min": float(min(scores)),
            "selection_score_max": float(max(scores)),
        }


def usable_claims(claims: Sequence[ClaimRecord]) -> list[ClaimRecord]:
    """Independent claims, cancellation markers removed, de-duplicated.

    A claim whose lowercased text contains "canceled" or "cancelled" is
    uninformative boilerplate.  De-duplication is by exact text; the
    first occurrence in claim_sequence order survives.
    """
    seen: set[str] = set()
    out: list[ClaimRecord] = []
    for claim in sorted(claims, key=lambda c: c.claim_sequence):
        if not claim.is_independent:
            continue
        lowered = claim.text.lower()
        if any(marker in lowered for marker in CANCELLED_MARKERS):
            continue
        if claim.text in seen:
            continue
        seen.add(claim.text)
        out.append(claim)
    return out


FUNNEL_STAGES = ("window", "multiparty", "no_claims")


def filter_cases(
    raw_rows: Iterable[tuple[str, str, int]],
    claims_index: Mapping[str, Sequence[ClaimRecord]],
    window: tuple[int, int] = (2001, 2014),
) -> tuple[list[InterferenceCase], dict[str, int]]:
    """Apply the case funnel: filing window, two applications, claims present.

    ``raw_rows`` hold one (interference_no, application_id, filing_year)
    row per involved application.  A case is in-window iff every
    involved application's filing year lies inside the closed window.
    """
    cases: dict[str, dict[str, int]] = {}
    for interference_no, application_id, year in raw_rows:
        apps = cases.setdefault(interference_no, {})
        year = int(year)
        if application_id in apps and apps[application_id] != year:
            raise IngestConflictError(
                f"interference {interference_no!r}: application {application_id!r} "
                "listed with conflicting filing years"
            )
        apps[application_id] = year

    counters = {stage: 0 for stage in FUNNEL_STAGES}
    counters["cases_raw"] = len(cases)
    kept: list[InterferenceCase] = []
    for interference_no in sorted(cases):
        apps = cases[interference_no]
        if not all(window[0] <= year <= window[1] for year in apps.values()):
            counters["window"] += 1
            continue
        if len(apps) != 2:
            counters["multiparty"] += 1
            continue
        app_ids = tuple(sorted(apps))
        if any(not usable_claims(claims_index.get(app, ())) for app in app_ids):
            counters["no_claims"] += 1
            continue
        kept.append(
            InterferenceCase(
                interference_no=interference_no,
                application_ids=app_ids,
                filing_years=(apps[app_ids[0]], apps[app_ids[1]]),
            )
        )
    counters["cases_kept"] = len(kept)
    counters["in_window"] = counters["cases_raw"] - counters["window"]
    return kept, counters


def enumerate_cross_pairs(
    case: InterferenceCase, claims_index: Mapping[str, Sequence[ClaimRecord]]
) -> list[tuple[ClaimRecord, ClaimRecord]]:
    """All m x n combinations of usable claims across the two applications."""
    app_a, app_b = case.application_ids
    claims_a = usable_claims(claims_index.get(app_a, ()))
    claims_b = usable_claims(claims_index.get(app_b, ()))
    if not claims_a or not claims_b:
        raise SelectionError(
            f"case {case.interference_no}: an application lost all claims after filtering"
        )
    return [(a, b) for a in claims_a for b in claims_b]


def _pair_sort_key(pair: tuple[ClaimRecord, ClaimRecord]):
    a, b = pair
    return (a.patent_id, a.claim_sequence, b.patent_id, b.claim_sequence)


def select_representative_pair(
    interference_no: str,
    candidates: Sequence[tuple[ClaimRecord, ClaimRecord]],
    reference: Embedder,
) -> ClaimPair:
    """Argmax of reference cosine over candidates; lexicographic tie-break."""
    if not candidates:
        raise ParameterError("no candidate pairs to select from")
    best: tuple[ClaimRecord, ClaimRecord] | None = None
    best_score = float("-inf")
    cache: dict[str, object] = {}

    def vec(claim: ClaimRecord):
        if claim.text not in cache:
            try:
                cache[claim.text] = reference.embed(claim.text)
            except Exception as exc:
                raise SelectionError(
                    f"reference embedder failed on claim "
                    f"{claim.patent_id}/{claim.claim_sequence}: {exc}"
                ) from exc
        return cache[claim.text]

    for pair in sorted(candidates, key=_pair_sort_key):
        score = cosine(vec(pair[0]), vec(pair[1]))
        if score > best_score:
            best, best_score = pair, score
    assert best is not None
    return ClaimPair(interference_no, best[0], best[1], best_score)


def make_random_pairs(
    true_pairs: Sequence[ClaimPair], seed: int, reference: Embedder | None = None
) -> list[ClaimPair]:
    """Cross-interference control pairs, one per true pair.

    Pair i keeps claim_a of interference i and takes claim_b from a
    uniformly drawn different interference (also requiring a different
    patent, since one application can appear in several interferences).
    Each pair has its own RNG stream, so the pairing is deterministic.
    """
    n = len(true_pairs)
    if n < 2:
        raise ParameterError("need at least two interferences to build random pairs")
    out: list[ClaimPair] = []
    for i, pair in enumerate(true_pairs):
        eligible = [
            j
            for j in range(n)
            if true_pairs[j].interference_no != pair.interference_no
            and true_pairs[j].claim_b.patent_id != pair.claim_a.patent_id
        ]
        if not eligible:
            raise ParameterError(
                f"no cross-interference partner for case {pair.interference_no}"
            )
        rng = item_rng(seed, RANDOM_PAIR_STAGE, i)
        j = eligible[int(rng.integers(len(eligible)))]
        other = true_pairs[j]
        score = (
            cosine(reference.embed(pair.claim_a.text), reference.embed(other.claim_b.text))
            if reference is not None
            else 0.0
        )
        out.append(
            ClaimPair(
                interference_no=f"{pair.interference_no}|{other.interference_no}",
                claim_a=pair.claim_a,
                claim_b=other.claim_b,
                selection_score=score,
            )
        )
    return out


def build_benchmark(
    raw_rows: Iterable[tuple[str, str, int]],
    claims_index: Mapping[str, Sequence[ClaimRecord]],
    reference: Embedder,
    seed: int,
    window: tuple[int, int] = (2001, 2014),
    reference_label: str = "stub",
) -> BenchmarkDataset:
    """Full benchmark build: funnel, per-case selection, random control set."""
    cases, counters = filter_cases(raw_rows, claims_index, window)
    true_pairs: list[ClaimPair] = []
    total_claims = 0
    total_candidates = 0
    for case in cases:
        candidates = enumerate_cross_pairs(case, claims_index)
        total_candidates += len(candidates)
        true_pairs.append(select_representative_pair(case.interference_no, candidates, reference))
    unique_apps = {app for case in cases for app in case.application_ids}
    total_claims = sum(len(usable_claims(claims_index.get(app, ()))) for app in sorted(unique_apps))
    counters["usable_claims"] = total_claims
    counters["candidate_pairs"] = total_candidates
    random_pairs = make_random_pairs(true_pairs, seed, reference) if len(true_pairs) >= 2 else []
    dataset = BenchmarkDataset(
        true_pairs=true_pairs,
        random_pairs=random_pairs,
        seed=seed,
        reference_label=reference_label,
        provenance=counters,
    )
    counters.update(dataset.selection_score_stats())
    return dataset
