"""Table parsing and clean-corpus filter tests."""

from __future__ import annotations

import tracemalloc
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patsim.errors import IngestConflictError, SchemaError
from patsim.ingest import (
    AssignmentType,
    ColumnMap,
    application_schema,
    build_clean_corpus,
    claim_is_independent,
    cpc_schema,
    parse_claims,
    parse_table,
    patent_schema,
)

COLS = ColumnMap()


def rows(*lines: str) -> list[str]:
    return [line + "\n" for line in lines]


class TestParseTable:
    def test_direct_field_mapping(self):
        reader = parse_table(
            rows("patent_id\tfiling_date", "X1\t2010-03-04"), application_schema(COLS)
        )
        assert list(reader) == [("X1", date(2010, 3, 4))]
        assert reader.counters.read == 1
        assert reader.counters.yielded == 1

    def test_arity_mismatch_counted(self):
        reader = parse_table(rows("patent_id\tfiling_date", "X1"), application_schema(COLS))
        assert list(reader) == []
        assert reader.counters.malformed == 1

    def test_three_row_file_with_one_malformed(self):
        reader = parse_table(
            rows(
                "patent_id\tfiling_date",
                "X1\t2010-03-04",
                "X2\tnot-a-date",
                "X3\t2011-07-19",
            ),
            application_schema(COLS),
        )
        assert len(list(reader)) == 2
        assert reader.counters.read == 3
        assert reader.counters.malformed == 1

    def test_missing_column_is_schema_error(self):
        with pytest.raises(SchemaError, match="filing_date"):
            parse_table(rows("patent_id\tother", "X1\tz"), application_schema(COLS))

    def test_embedded_tab_is_malformed(self):
        reader = parse_table(
            rows("patent_id\tpatent_type\tpatent_abstract", "X1\tutility\ttext\twith tab"),
            patent_schema(COLS),
        )
        assert list(reader) == []
        assert reader.counters.malformed == 1

    def test_bad_cpc_symbol_is_malformed(self):
        reader = parse_table(
            rows("patent_id\tcpc_group\tcpc_type", "X1\tNOT_A_SYMBOL\tinventional"),
            cpc_schema(COLS),
        )
        assert list(reader) == []
        assert reader.counters.malformed == 1

    def test_gzip_compressed_input(self, tmp_path):
        import gzip

        from patsim.ingest import open_text

        path = tmp_path / "apps.tsv.gz"
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write("patent_id\tfiling_date\nX1\t2010-03-04\n")
        reader = parse_table(open_text(path), application_schema(COLS))
        assert list(reader) == [("X1", date(2010, 3, 4))]

    @given(
        st.lists(
            st.tuples(st.booleans(), st.integers(0, 10 ** 6)),
            min_size=0,
            max_size=60,
        )
    )
    def test_read_equals_yielded_plus_malformed(self, spec):
        lines = ["patent_id\tfiling_date"]
        for ok, n in spec:
            lines.append(f"P{n}\t2010-01-01" if ok else f"P{n}\tbad-date")
        reader = parse_table(rows(*lines), application_schema(COLS))
        yielded = len(list(reader))
        assert reader.counters.read == len(spec)
        assert reader.counters.read == yielded + reader.counters.malformed

    def test_streaming_memory_is_bounded(self, tmp_path):
        """Peak parse memory must not grow with file length."""

        def peak_for(n_rows: int) -> int:
            path = tmp_path / f"rows_{n_rows}.tsv"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("patent_id\tfiling_date\n")
                for i in range(n_rows):
                    fh.write(f"P{i}\t2010-01-01\n")
            from patsim.ingest import open_text

            tracemalloc.start()
            reader = parse_table(open_text(path), application_schema(COLS))
            for _ in reader:
                pass
            _, peak = tracemalloc.get_traced_memory()
            tracemalloc.stop()
            return peak

        small = peak_for(10_000)
        large = peak_for(1_000_000)
        assert large < 5 * small + 1_000_000


CLEAN_CPC = [
    ("A1", "G06F16/9535", AssignmentType.INVENTIONAL),
    ("B2", "G06F16/9535", AssignmentType.INVENTIONAL),
]
CLEAN_APP = [("A1", date(2010, 1, 2)), ("B2", date(2010, 6, 7))]
CLEAN_PAT = [("A1", "utility", "First abstract."), ("B2", "utility", "Second abstract.")]


class TestBuildCleanCorpus:
    def seven_patent_fixture(self):
        cpc = CLEAN_CPC + [
            ("CDUAL", "G06F16/9535", AssignmentType.INVENTIONAL),
            ("CDUAL", "A61K38/17", AssignmentType.INVENTIONAL),
            ("DADD", "G06F16/9535", AssignmentType.ADDITIONAL),
            ("ENONU", "G06F16/9535", AssignmentType.INVENTIONAL),
            ("FNOAB", "G06F16/9535", AssignmentType.INVENTIONAL),
        ]
        app = CLEAN_APP + [
            ("CDUAL", date(2011, 1, 1)),
            ("DADD", date(2011, 1, 1)),
            ("ENONU", date(2011, 1, 1)),
            ("FNOAB", date(2011, 1, 1)),
        ]
        pat = CLEAN_PAT + [
            ("CDUAL", "utility", "Dual body."),
            ("DADD", "utility", "Additional body."),
            ("ENONU", "design", "Design body."),
            ("FNOAB", "utility", ""),
        ]
        return cpc, app, pat

    def test_fixture_counters(self):
        corpus = build_clean_corpus(*self.seven_patent_fixture())
        assert sorted(corpus.records) == ["A1", "B2"]
        assert corpus.provenance["dual"] == 1
        assert corpus.provenance["non_inventional"] == 1
        assert corpus.provenance["non_utility"] == 1
        assert corpus.provenance["no_abstract"] == 1
        assert corpus.provenance["kept"] == 2

    def test_funnel_survivor_counts(self):
        corpus = build_clean_corpus(*self.seven_patent_fixture())
        prov = corpus.provenance
        assert prov["input_patents"] == 6
        assert prov["after_single_cpc"] == 5
        assert prov["after_inventional"] == 4
        assert prov["after_utility"] == 3
        assert prov["after_filing_date"] == 3
        assert prov["kept"] == 2

    def test_two_inventional_codes_excluded(self):
        cpc = [
            ("X", "G06F16/9535", AssignmentType.INVENTIONAL),
            ("X", "A61K38/17", AssignmentType.INVENTIONAL),
        ]
        corpus = build_clean_corpus(cpc, [("X", date(2010, 1, 1))], [("X", "utility", "Body.")])
        assert len(corpus) == 0
        assert corpus.provenance["dual"] == 1

    def test_missing_filing_date_counted(self):
        corpus = build_clean_corpus(CLEAN_CPC, [("A1", date(2010, 1, 2))], CLEAN_PAT)
        assert sorted(corpus.records) == ["A1"]
        assert corpus.provenance["no_filing_date"] == 1

    def test_conflicting_abstract_is_error(self):
        pat = CLEAN_PAT + [("A1", "utility", "Different abstract.")]
        with pytest.raises(IngestConflictError, match="A1"):
            build_clean_corpus(CLEAN_CPC, CLEAN_APP, pat)

    def test_identical_duplicate_rows_are_fine(self):
        corpus = build_clean_corpus(
            CLEAN_CPC + [CLEAN_CPC[0]], CLEAN_APP + [CLEAN_APP[0]], CLEAN_PAT + [CLEAN_PAT[0]]
        )
        assert sorted(corpus.records) == ["A1", "B2"]

    def test_filing_year_derived_from_date(self):
        corpus = build_clean_corpus(CLEAN_CPC, CLEAN_APP, CLEAN_PAT)
        record = corpus.records["A1"]
        assert record.filing_year == record.filing_date.year == 2010
        assert record.cpc_full_symbol == "G06F16/9535"

    @given(st.permutations(list(range(6))))
    @settings(max_examples=25)
    def test_permutation_invariance(self, order):
        cpc, app, pat = self.seven_patent_fixture()
        base = build_clean_corpus(cpc, app, pat)
        # permute each table independently with the same index pattern
        def shuffled(table):
            idx = [i % len(table) for i in order][: len(table)]
            rest = [i for i in range(len(table)) if i not in idx]
            return [table[i] for i in idx + rest]

        permuted = build_clean_corpus(shuffled(cpc), shuffled(app), shuffled(pat))
        assert permuted.records == base.records
        assert permuted.provenance == base.provenance

    def test_idempotence(self):
        corpus = build_clean_corpus(*self.seven_patent_fixture())
        cpc = [(r.patent_id, r.cpc_full_symbol, r.cpc[0].assignment_type)
               for r in corpus.records.values()]
        app = [(r.patent_id, r.filing_date) for r in corpus.records.values()]
        pat = [(r.patent_id, "utility", r.abstract) for r in corpus.records.values()]
        again = build_clean_corpus(cpc, app, pat)
        assert again.records == corpus.records
        assert all(again.provenance[s] == 0 for s in
                   ("dual", "non_inventional", "non_utility", "no_filing_date", "no_abstract"))


class TestParseClaims:
    def test_empty_dependency_is_independent(self):
        lines = rows(
            "patent_id\tclaim_sequence\tclaim_text\tdependent",
            "X\t1\tA device comprising a widget.\t",
        )
        (claim,) = list(parse_claims(lines))
        assert claim.is_independent

    def test_textual_reference_is_dependent(self):
        lines = rows(
            "patent_id\tclaim_sequence\tclaim_text\tdependent",
            "X\t2\tThe device of claim 1, wherein it is blue.\t",
        )
        (claim,) = list(parse_claims(lines))
        assert not claim.is_independent

    def test_ten_claim_fixture_has_six_independent(self):
        body = ["patent_id\tclaim_sequence\tclaim_text\tdependent"]
        dependent = 0
        for i in range(1, 11):
            if i % 3 == 0:  # 3, 6, 9 carry dependency column values
                body.append(f"X\t{i}\tAn assembly with parts.\t{i - 1}")
                dependent += 1
            elif i == 10:  # textual reference without dependency column
                body.append(f"X\t{i}\tThe assembly of claim 1 with a lid.\t")
                dependent += 1
            else:
                body.append(f"X\t{i}\tAn independent mechanism number {i}.\t")
        claims = list(parse_claims(rows(*body)))
        assert dependent == 4
        assert sum(c.is_independent for c in claims) == 6

    def test_claim_sequence_preserved(self):
        lines = rows(
            "patent_id\tclaim_sequence\tclaim_text\tdependent",
            "X\t7\tAn independent mechanism.\t",
        )
        (claim,) = list(parse_claims(lines))
        assert claim.claim_sequence == 7

    def test_independence_rule_direct(self):
        assert claim_is_independent("", "A device comprising a frame.")
        assert claim_is_independent("NULL", "A free-standing method.")
        assert not claim_is_independent("3", "A method of doing something.")
        assert not claim_is_independent("", "the widget of claim 12, further comprising")
        # the textual backstop only scans the first 200 characters
        long_tail = "A " + "x" * 250 + " referencing claim 2"
        assert claim_is_independent("", long_tail)
