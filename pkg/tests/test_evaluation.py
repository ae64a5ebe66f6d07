"""Win-rate harness: scoring, argmax/argmin oracle, rendering."""

from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patsim.bench import BenchmarkDataset, ClaimPair
from patsim.embedding import FixedEmbedder, HashEmbedder
from patsim.errors import ParameterError
from patsim.evaluation import (
    EvalReport,
    ModelEntry,
    ModelFamily,
    ScoreMatrix,
    render_report,
    round_pct,
    score_all,
    score_distributions,
    subset_table,
    win_rates,
)
from patsim.ingest import ClaimRecord


def pair(no: str, text_a: str, text_b: str) -> ClaimPair:
    return ClaimPair(
        interference_no=no,
        claim_a=ClaimRecord(f"{no}-A", 1, text_a, True),
        claim_b=ClaimRecord(f"{no}-B", 1, text_b, True),
        selection_score=0.0,
    )


def dataset(true_texts, random_texts) -> BenchmarkDataset:
    return BenchmarkDataset(
        true_pairs=[pair(f"T{i}", a, b) for i, (a, b) in enumerate(true_texts)],
        random_pairs=[pair(f"R{i}", a, b) for i, (a, b) in enumerate(random_texts)],
        seed=0,
    )


def matrix(kind: str, values: np.ndarray) -> ScoreMatrix:
    n, m = values.shape
    return ScoreMatrix(
        kind=kind,
        pair_labels=[f"{kind}{i}" for i in range(n)],
        model_names=[f"m{j}" for j in range(m)],
        values=values.astype(float),
    )


def brute_force_table(values_true, values_random):
    """Independent oracle: per-row python max/min scan with tie handling."""
    n_models = values_true.shape[1]
    wins_max = [0] * n_models
    wins_min = [0] * n_models
    ties_max = ties_min = 0
    denom_t = denom_r = 0
    for row in values_true:
        if any(np.isnan(x) for x in row):
            continue
        denom_t += 1
        top = max(row)
        owners = [j for j, x in enumerate(row) if x == top]
        if len(owners) == 1:
            wins_max[owners[0]] += 1
        else:
            ties_max += 1
    for row in values_random:
        if any(np.isnan(x) for x in row):
            continue
        denom_r += 1
        bottom = min(row)
        owners = [j for j, x in enumerate(row) if x == bottom]
        if len(owners) == 1:
            wins_min[owners[0]] += 1
        else:
            ties_min += 1
    return wins_max, wins_min, ties_max, ties_min, denom_t, denom_r


class TestScoreAll:
    def test_identical_claims_score_one(self):
        models = [ModelEntry("stub", HashEmbedder(dim=8))]
        bench = dataset([("same text", "same text")], [("same text", "other text")])
        mt, mr = score_all(models, bench)
        assert mt.values[0, 0] == 1.0

    def test_hand_set_matrix(self):
        def unit(angle):
            return np.array([np.cos(angle), np.sin(angle)])

        table_one = {"ta": unit(0.0), "tb": unit(np.pi / 3), "tc": unit(np.pi / 2), "td": unit(np.pi)}
        table_two = {k: unit(0.1) for k in table_one}  # everything identical
        models = [
            ModelEntry("one", FixedEmbedder(table_one)),
            ModelEntry("two", FixedEmbedder(table_two)),
        ]
        bench = dataset([("ta", "tb"), ("ta", "tc"), ("ta", "td"), ("tb", "tc")], [("ta", "tb")])
        mt, _ = score_all(models, bench)
        expected = np.array(
            [
                [np.cos(np.pi / 3), 1.0],
                [np.cos(np.pi / 2), 1.0],
                [np.cos(np.pi), 1.0],
                [np.cos(np.pi / 6), 1.0],
            ]
        )
        np.testing.assert_allclose(mt.values, expected, atol=1e-12)

    def test_undefined_entries_reported_and_excluded(self):
        table = {"ta": np.array([1.0, 0.0]), "tb": np.array([0.5, 0.5])}
        models = [
            ModelEntry("full", HashEmbedder(dim=4)),
            ModelEntry("partial", FixedEmbedder(table)),
        ]
        true_texts = [("ta", "tb")] * 4 + [("ta", "unknown")]
        bench = dataset(true_texts, [("ta", "tb")] * 5)
        mt, mr = score_all(models, bench)
        assert np.isnan(mt.values[4, 1])
        assert mt.reasons[(4, 1)] == "undefined-embedding"
        result = win_rates(mt, mr)
        assert result.denominator_true == 4
        assert result.denominator_random == 5
        assert result.excluded_true == ["T4"]

    def test_no_models_is_error(self):
        with pytest.raises(ParameterError):
            score_all([], dataset([("a", "b")], [("a", "b")]))

    def test_duplicate_names_rejected(self):
        models = [ModelEntry("m", HashEmbedder()), ModelEntry("m", HashEmbedder())]
        with pytest.raises(ParameterError):
            score_all(models, dataset([("a", "b")], [("a", "b")]))

    def test_workers_match_serial(self):
        models = [ModelEntry(f"m{i}", HashEmbedder(dim=8, salt=str(i))) for i in range(3)]
        texts = [(f"left {i}", f"right {i}") for i in range(10)]
        bench = dataset(texts, texts)
        mt1, mr1 = score_all(models, bench, workers=1)
        mt2, mr2 = score_all(models, bench, workers=4)
        assert np.array_equal(mt1.values, mt2.values)
        assert np.array_equal(mr1.values, mr2.values)


class TestWinRates:
    def test_two_models_three_to_one(self):
        vt = np.array([[0.9, 0.1], [0.8, 0.2], [0.7, 0.3], [0.1, 0.6]])
        vr = np.array([[0.5, 0.6], [0.6, 0.5], [0.4, 0.5], [0.3, 0.5]])
        table = win_rates(matrix("true", vt), matrix("random", vr))
        by_name = {r.name: r for r in table.rows}
        assert by_name["m0"].max_wins == 3
        assert by_name["m1"].max_wins == 1
        assert by_name["m0"].max_pct == 75
        assert by_name["m1"].max_pct == 25
        assert by_name["m0"].min_wins == 3
        assert by_name["m1"].min_wins == 1

    def test_single_model_sweeps(self):
        vt = np.array([[0.5], [0.2]])
        vr = np.array([[0.1], [0.9]])
        table = win_rates(matrix("true", vt), matrix("random", vr))
        assert table.rows[0].max_pct == 100
        assert table.rows[0].min_pct == 100

    def test_all_equal_row_is_tie(self):
        vt = np.array([[0.5, 0.5, 0.5], [0.9, 0.1, 0.2]])
        vr = np.array([[0.1, 0.2, 0.3]])
        table = win_rates(matrix("true", vt), matrix("random", vr))
        assert table.ties_max == 1
        assert sum(r.max_wins for r in table.rows) == 1

    def test_empty_matrices_error(self):
        with pytest.raises(ParameterError):
            win_rates(matrix("true", np.empty((0, 2))), matrix("random", np.empty((0, 2))))

    @given(
        st.integers(1, 40),
        st.integers(1, 8),
        st.integers(0, 10 ** 6),
        st.booleans(),
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, n_rows, n_models, seed, inject_ties):
        rng = np.random.default_rng(seed)
        vt = rng.uniform(-1, 1, size=(n_rows, n_models))
        vr = rng.uniform(-1, 1, size=(n_rows, n_models))
        if inject_ties and n_models >= 2:
            vt[0, :] = 0.25
            vr[-1, :] = -0.5
        table = win_rates(matrix("true", vt), matrix("random", vr))
        wins_max, wins_min, ties_max, ties_min, denom_t, denom_r = brute_force_table(vt, vr)
        assert [r.max_wins for r in table.rows] == wins_max
        assert [r.min_wins for r in table.rows] == wins_min
        assert table.ties_max == ties_max
        assert table.ties_min == ties_min
        assert sum(wins_max) + ties_max == denom_t
        assert sum(wins_min) + ties_min == denom_r

    def test_duplicate_embedder_all_ties(self):
        models = [
            ModelEntry("orig", HashEmbedder(dim=8, salt="dup")),
            ModelEntry("copy", HashEmbedder(dim=8, salt="dup")),
        ]
        texts = [(f"l{i}", f"r{i}") for i in range(6)]
        bench = dataset(texts, texts)
        mt, mr = score_all(models, bench)
        table = win_rates(mt, mr)
        assert table.ties_max == 6
        assert table.ties_min == 6
        assert all(r.max_wins == 0 and r.min_wins == 0 for r in table.rows)

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(5)
        vt = rng.uniform(-1, 1, size=(20, 4))
        vr = rng.uniform(-1, 1, size=(20, 4))
        base = win_rates(matrix("true", vt), matrix("random", vr))
        perm = rng.permutation(20)
        permuted = win_rates(matrix("true", vt[perm]), matrix("random", vr[perm]))
        assert [r.max_pct for r in base.rows] == [r.max_pct for r in permuted.rows]
        assert [r.min_pct for r in base.rows] == [r.min_pct for r in permuted.rows]

    def test_uniform_increasing_transform_preserves_wins(self):
        """score -> 2*score - 0.1 applied to every column is argmax-neutral."""
        rng = np.random.default_rng(6)
        for _ in range(20):
            vt = rng.uniform(-1, 1, size=(15, 5))
            vr = rng.uniform(-1, 1, size=(15, 5))
            base = win_rates(matrix("true", vt), matrix("random", vr))
            transformed = win_rates(
                matrix("true", 2 * vt - 0.1), matrix("random", 2 * vr - 0.1)
            )
            assert [r.max_wins for r in base.rows] == [r.max_wins for r in transformed.rows]
            assert [r.min_wins for r in base.rows] == [r.min_wins for r in transformed.rows]
            assert base.ties_max == transformed.ties_max

    def test_single_column_transform_can_flip_winners(self):
        """The protocol compares raw cosines across models, so recalibrating
        one model alone is NOT neutral; the harness must reflect that."""
        vt = np.array([[0.8, 0.5]])
        vr = np.array([[-0.8, -0.5]])
        base = win_rates(matrix("true", vt), matrix("random", vr))
        assert base.rows[0].max_wins == 1
        vt2, vr2 = vt.copy(), vr.copy()
        vt2[:, 1] = 2 * vt2[:, 1] - 0.1  # 0.5 -> 0.9 overtakes 0.8
        transformed = win_rates(matrix("true", vt2), matrix("random", vr2))
        assert transformed.rows[1].max_wins == 1


class TestSubsetTable:
    def test_single_model_sweeps(self):
        rng = np.random.default_rng(1)
        vt = rng.uniform(-1, 1, size=(8, 3))
        vr = rng.uniform(-1, 1, size=(8, 3))
        table = subset_table(matrix("true", vt), matrix("random", vr), ["m1"])
        assert table.rows[0].max_pct == 100
        assert table.rows[0].min_pct == 100

    def test_recomputed_not_rescaled(self):
        # model 2 always wins; restricted to {0, 1} the winners must be
        # recomputed per row, not carried over
        vt = np.array([[0.1, 0.2, 0.9], [0.3, 0.2, 0.9], [0.2, 0.4, 0.9]])
        vr = np.array([[0.1, 0.2, -0.9], [0.3, 0.2, -0.9], [0.2, 0.4, -0.9]])
        restricted = subset_table(matrix("true", vt), matrix("random", vr), ["m0", "m1"])
        wins_max, wins_min, *_ = brute_force_table(vt[:, :2], vr[:, :2])
        assert [r.max_wins for r in restricted.rows] == wins_max
        assert [r.min_wins for r in restricted.rows] == wins_min

    def test_exclusions_recomputed_on_subset(self):
        vt = np.array([[0.1, 0.2, np.nan], [0.3, 0.2, 0.9]])
        vr = np.array([[0.1, 0.2, 0.4], [0.3, 0.2, 0.9]])
        full = win_rates(matrix("true", vt), matrix("random", vr))
        assert full.denominator_true == 1
        restricted = subset_table(matrix("true", vt), matrix("random", vr), ["m0", "m1"])
        assert restricted.denominator_true == 2

    def test_unknown_name_is_error(self):
        vt = np.ones((2, 2))
        with pytest.raises(ParameterError):
            subset_table(matrix("true", vt), matrix("random", vt), ["nope"])


class TestRoundPct:
    def test_paper_style_rounding(self):
        assert round_pct(100 * 69 / 133) == 52
        assert round_pct(100 * 1 / 3) == 33
        assert round_pct(50.5) == 51
        assert round_pct(0.0) == 0


def small_report() -> EvalReport:
    vt = np.array([[0.9, 0.1], [0.8, 0.2], [0.1, 0.6]])
    vr = np.array([[0.5, 0.6], [0.6, 0.5], [0.4, 0.5]])
    mt, mr = matrix("true", vt), matrix("random", vr)
    return EvalReport(
        tables=[
            ("Percentage of cases of greatest and lowest similarity by model (all)",
             win_rates(mt, mr)),
            ("Percentage of cases of greatest and lowest similarity by model (subset)",
             subset_table(mt, mr, ["m0"])),
        ],
        distributions={"true": score_distributions(mt), "random": score_distributions(mr)},
        seeds={"master": 42},
    )


class TestRenderReport:
    def test_two_sections_emitted(self):
        text = render_report(small_report(), "text").decode()
        assert text.count("Percentage of cases") == 2
        assert "Max similarity (%)" in text

    def test_byte_stable(self):
        for fmt in ("text", "csv", "json"):
            assert render_report(small_report(), fmt) == render_report(small_report(), fmt)

    def test_csv_round_trips(self):
        payload = render_report(small_report(), "csv").decode()
        rows = list(csv.DictReader(io.StringIO(payload)))
        table = small_report().tables[0][1]
        first = next(r for r in rows if r["model"] == "m0")
        assert int(first["max_wins"]) == table.rows[0].max_wins
        assert int(first["max_pct"]) == table.rows[0].max_pct
        assert int(first["denominator_true"]) == table.denominator_true

    def test_json_round_trips_through_from_json(self):
        report = small_report()
        payload = json.loads(render_report(report, "json").decode())
        again = EvalReport.from_json_obj(payload)
        assert render_report(again, "text") == render_report(report, "text")
        assert render_report(again, "csv") == render_report(report, "csv")

    def test_unknown_format_rejected(self):
        with pytest.raises(ParameterError):
            render_report(small_report(), "yaml")
