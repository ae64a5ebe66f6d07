"""Patents View-style TSV ingestion and the clean-corpus filters.

Input tables are tab-separated with a header row and no quoting: an
embedded tab changes a row's arity and makes it malformed.  Parsing is
streaming (bounded memory) and every dropped row increments a counter;
``read == yielded + malformed`` holds for every table.

The clean corpus keeps patents with exactly one CPC assignment, of
inventional type, utility patent type, a resolvable filing date and a
non-empty abstract, applying those filters in that order and counting
removals per stage.
"""

from __future__ import annotations

import gzip
import re
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Callable, Iterable, Iterator

from .errors import IngestConflictError, SchemaError
from .embedding.text import normalize_text


class AssignmentType(Enum):
    INVENTIONAL = "inventional"
    ADDITIONAL = "additional"


class PatentType(Enum):
    UTILITY = "utility"
    OTHER = "other"


_CPC_SYMBOL_RE = re.compile(r"^([A-HY])(\d{2})([A-Z])(\d+)/(\w+)$")


@dataclass(frozen=True)
class CpcAssignment:
    patent_id: str
    section: str
    class_: str
    subclass: str
    group: str
    subgroup: str
    assignment_type: AssignmentType

    def full_symbol(self) -> str:
        return f"{self.section}{self.class_}{self.subclass}{self.group}/{self.subgroup}"


def parse_cpc_symbol(patent_id: str, symbol: str, assignment_type: AssignmentType) -> CpcAssignment:
    m = _CPC_SYMBOL_RE.match(symbol.strip())
    if m is None:
        raise ValueError(f"unparseable CPC symbol {symbol!r}")
    section, class_, subclass, group, subgroup = m.groups()
    return CpcAssignment(patent_id, section, class_, subclass, group, subgroup, assignment_type)


@dataclass(frozen=True)
class PatentRecord:
    patent_id: str
    filing_date: date
    abstract: str
    patent_type: PatentType
    cpc: tuple[CpcAssignment, ...]

    @property
    def filing_year(self) -> int:
        return self.filing_date.year

    @property
    def cpc_full_symbol(self) -> str:
        return self.cpc[0].full_symbol()


_CLAIM_DEP_RE = re.compile(r"\bclaim\s+\d+")


@dataclass(frozen=True)
class ClaimRecord:
    patent_id: str
    claim_sequence: int
    text: str
    is_independent: bool


def claim_is_independent(dependency_field: str, text: str) -> bool:
    """Empty/null dependency column and no "claim N" reference early on.

    Pre-grant dumps have unreliable dependency columns, so the textual
    backstop (first 200 characters, lowercased) guards against rows that
    reference another claim without declaring a dependency.
    """
    dep = dependency_field.strip()
    if dep and dep.lower() != "null" and dep != "-1":
        return False
    return _CLAIM_DEP_RE.search(text[:200].lower()) is None


@dataclass
class PatentCorpus:
    records: dict[str, PatentRecord]
    provenance: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)


# ---------------------------------------------------------------------------
# Streaming table parsing


@dataclass
class RowCounters:
    read: int = 0
    yielded: int = 0
    malformed: int = 0


@dataclass(frozen=True)
class TableSchema:
    """Required columns of one table and their value converters."""

    table: str
    fields: tuple[tuple[str, Callable[[str], object]], ...]

    def column_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.fields)


def open_text(path) -> Iterator[str]:
    """Line iterator over a possibly gzip-compressed UTF-8 file."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8", newline="") as fh:
        for line in fh:
            yield line


class TableReader:
    """Streaming typed reader over header-first delimited lines.

    Iterating yields tuples of converted values in schema field order.
    Rows with the wrong arity or a converter failure are counted in
    ``counters.malformed`` and skipped.  No quoting: a delimiter inside
    a text field is an arity mismatch, hence a malformed row.
    """

    def __init__(self, lines: Iterable[str], schema: TableSchema, delimiter: str = "\t"):
        self._lines = iter(lines)
        self.schema = schema
        self.counters = RowCounters()
        self._delimiter = delimiter
        try:
            header_line = next(self._lines)
        except StopIteration:
            raise SchemaError(f"{schema.table}: empty input, no header row") from None
        header = header_line.rstrip("\r\n").split(delimiter)
        positions = {name: i for i, name in enumerate(header)}
        self._width = len(header)
        self._slots = []
        for name, convert in schema.fields:
            if name not in positions:
                raise SchemaError(
                    f"{schema.table}: required column {name!r} missing from header {header}"
                )
            self._slots.append((positions[name], convert))

    def __iter__(self) -> Iterator[tuple]:
        for line in self._lines:
            self.counters.read += 1
            parts = line.rstrip("\r\n").split(self._delimiter)
            if len(parts) != self._width:
                self.counters.malformed += 1
                continue
            try:
                row = tuple(convert(parts[pos]) for pos, convert in self._slots)
            except ValueError:
                self.counters.malformed += 1
                continue
            self.counters.yielded += 1
            yield row


def parse_table(lines: Iterable[str], schema: TableSchema, delimiter: str = "\t") -> TableReader:
    return TableReader(lines, schema, delimiter)


def _parse_date(raw: str) -> date:
    return date.fromisoformat(raw.strip())


def _parse_assignment_type(raw: str) -> AssignmentType:
    try:
        return AssignmentType(raw.strip().lower())
    except ValueError:
        raise ValueError(f"unknown CPC assignment type {raw!r}") from None


def _validate_cpc_symbol(raw: str) -> str:
    symbol = raw.strip()
    if _CPC_SYMBOL_RE.match(symbol) is None:
        raise ValueError(f"unparseable CPC symbol {symbol!r}")
    return symbol


def _parse_sequence(raw: str) -> int:
    value = int(raw.strip())
    if value < 1:
        raise ValueError(f"claim sequence must be >= 1, got {value}")
    return value


@dataclass(frozen=True)
class ColumnMap:
    """Column names of the input dumps; defaults follow the current
    Patents View release and every name is overridable in config."""

    cpc_patent_id: str = "patent_id"
    cpc_symbol: str = "cpc_group"
    cpc_type: str = "cpc_type"
    app_patent_id: str = "patent_id"
    app_filing_date: str = "filing_date"
    pat_patent_id: str = "patent_id"
    pat_type: str = "patent_type"
    pat_abstract: str = "patent_abstract"
    claim_patent_id: str = "patent_id"
    claim_sequence: str = "claim_sequence"
    claim_text: str = "claim_text"
    claim_dependency: str = "dependent"
    case_interference_no: str = "interference_no"
    case_application_id: str = "application_id"
    case_filing_date: str = "filing_date"
    utility_value: str = "utility"


def cpc_schema(cols: ColumnMap) -> TableSchema:
    return TableSchema(
        "cpc",
        (
            (cols.cpc_patent_id, str.strip),
            (cols.cpc_symbol, _validate_cpc_symbol),
            (cols.cpc_type, _parse_assignment_type),
        ),
    )


def application_schema(cols: ColumnMap) -> TableSchema:
    return TableSchema(
        "applications",
        ((cols.app_patent_id, str.strip), (cols.app_filing_date, _parse_date)),
    )


def patent_schema(cols: ColumnMap) -> TableSchema:
    return TableSchema(
        "patents",
        (
            (cols.pat_patent_id, str.strip),
            (cols.pat_type, lambda s: s.strip().lower()),
            (cols.pat_abstract, normalize_text),
        ),
    )


def claims_schema(cols: ColumnMap) -> TableSchema:
    return TableSchema(
        "claims",
        (
            (cols.claim_patent_id, str.strip),
            (cols.claim_sequence, _parse_sequence),
            (cols.claim_text, normalize_text),
            (cols.claim_dependency, str),
        ),
    )


def parse_claims(lines: Iterable[str], cols: ColumnMap | None = None) -> Iterator[ClaimRecord]:
    """Stream ClaimRecords with independence computed per detection rule."""
    reader = parse_table(lines, claims_schema(cols or ColumnMap()))
    for patent_id, sequence, text, dependency in reader:
        yield ClaimRecord(patent_id, sequence, text, claim_is_independent(dependency, text))


def load_claims_index(
    paths, cols: ColumnMap | None = None
) -> tuple[dict[str, list[ClaimRecord]], RowCounters]:
    """Parse one claims file per year and group records by patent id."""
    index: dict[str, list[ClaimRecord]] = {}
    totals = RowCounters()
    for path in paths:
        reader = parse_table(open_text(path), claims_schema(cols or ColumnMap()))
        for patent_id, sequence, text, dependency in reader:
            index.setdefault(patent_id, []).append(
                ClaimRecord(patent_id, sequence, text, claim_is_independent(dependency, text))
            )
        totals.read += reader.counters.read
        totals.yielded += reader.counters.yielded
        totals.malformed += reader.counters.malformed
    for claims in index.values():
        claims.sort(key=lambda c: c.claim_sequence)
    return index, totals


# ---------------------------------------------------------------------------
# Clean-corpus construction

FILTER_STAGES = ("dual", "non_inventional", "non_utility", "no_filing_date", "no_abstract")


def _merge_unique(table: dict, key: str, value, what: str) -> None:
    if key in table:
        if table[key] != value:
            raise IngestConflictError(f"patent {key!r}: conflicting {what} rows")
        return
    table[key] = value


def build_clean_corpus(
    cpc_rows: Iterable[tuple[str, str, AssignmentType]],
    application_rows: Iterable[tuple[str, date]],
    patent_rows: Iterable[tuple[str, str, str]],
    utility_value: str = "utility",
) -> PatentCorpus:
    """Join the three tables and apply the record-level filters.

    Filter order: single-CPC, inventional, utility, filing date
    resolvable, abstract non-empty.  Duplicate rows for one patent must
    agree; conflicting duplicates raise IngestConflictError naming the
    patent.  The result is independent of input row order.
    """
    assignments: dict[str, list[CpcAssignment]] = {}
    seen_cpc: dict[str, set] = {}
    for patent_id, symbol, assignment_type in cpc_rows:
        key = (symbol, assignment_type)
        seen = seen_cpc.setdefault(patent_id, set())
        if key in seen:
            continue
        seen.add(key)
        assignments.setdefault(patent_id, []).append(
            parse_cpc_symbol(patent_id, symbol, assignment_type)
        )

    filing: dict[str, date] = {}
    for patent_id, filed in application_rows:
        _merge_unique(filing, patent_id, filed, "filing-date")

    patents: dict[str, tuple[str, str]] = {}
    for patent_id, ptype, abstract in patent_rows:
        if patent_id in patents and patents[patent_id][1] != abstract:
            raise IngestConflictError(f"patent {patent_id!r}: conflicting abstracts")
        _merge_unique(patents, patent_id, (ptype, abstract), "patent")

    counters = {stage: 0 for stage in FILTER_STAGES}
    counters["input_patents"] = len(assignments)
    records: dict[str, PatentRecord] = {}
    for patent_id in sorted(assignments):
        cpc = assignments[patent_id]
        if len(cpc) != 1:
            counters["dual"] += 1
            continue
        if cpc[0].assignment_type is not AssignmentType.INVENTIONAL:
            counters["non_inventional"] += 1
            continue
        row = patents.get(patent_id)
        if row is None or row[0] != utility_value:
            counters["non_utility"] += 1
            continue
        if patent_id not in filing:
            counters["no_filing_date"] += 1
            continue
        abstract = row[1]
        if not abstract:
            counters["no_abstract"] += 1
            continue
        records[patent_id] = PatentRecord(
            patent_id=patent_id,
            filing_date=filing[patent_id],
            abstract=abstract,
            patent_type=PatentType.UTILITY,
            cpc=(cpc[0],),
        )
    counters["kept"] = len(records)
    # survivor counts per stage, for side-by-side funnel comparison
    counters["after_single_cpc"] = counters["input_patents"] - counters["dual"]
    counters["after_inventional"] = counters["after_single_cpc"] - counters["non_inventional"]
    counters["after_utility"] = counters["after_inventional"] - counters["non_utility"]
    counters["after_filing_date"] = counters["after_utility"] - counters["no_filing_date"]
    return PatentCorpus(records=records, provenance=counters)
