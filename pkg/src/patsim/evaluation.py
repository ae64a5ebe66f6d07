"""Max/min cosine win-rate scoring over the benchmark.

Every registered model scores every benchmark pair; on true pairs the
model with the strictly greatest cosine gains a max-win, on random
control pairs the strictly lowest gains a min-win.  Exact ties award no
win and are counted.  Pairs on which any model is undefined are dropped
listwise so all columns share one denominator, and the exclusions are
reported rather than silently absorbed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bench import BenchmarkDataset, ClaimPair
from .embedding import Embedder, cosine
from .errors import ParameterError, UndefinedEmbeddingError, UndefinedSimilarityError


class ModelFamily(Enum):
    STATIC = "static"
    CONTEXTUAL = "contextual"


@dataclass
class ModelEntry:
    name: str
    embedder: Embedder
    family: ModelFamily = ModelFamily.STATIC


@dataclass
class ScoreMatrix:
    kind: str  # "true" | "random"
    pair_labels: list[str]
    model_names: list[str]
    values: np.ndarray  # pairs x models, NaN = undefined
    reasons: dict[tuple[int, int], str] = field(default_factory=dict)

    def defined_rows(self) -> np.ndarray:
        return ~np.isnan(self.values).any(axis=1)

    def restrict(self, names: list[str]) -> "ScoreMatrix":
        missing = [n for n in names if n not in self.model_names]
        if missing:
            raise ParameterError(f"unknown model names {missing}")
        cols = [self.model_names.index(n) for n in names]
        reasons = {
            (i, k): reason
            for (i, j), reason in self.reasons.items()
            for k, c in enumerate(cols)
            if c == j
        }
        return ScoreMatrix(
            kind=self.kind,
            pair_labels=list(self.pair_labels),
            model_names=list(names),
            values=self.values[:, cols].copy(),
            reasons=reasons,
        )


def score_all(
    models: list[ModelEntry], benchmark: BenchmarkDataset, workers: int = 1
) -> tuple[ScoreMatrix, ScoreMatrix]:
    """Score both benchmark sections under every model."""
    if not models:
        raise ParameterError("no models registered")
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise ParameterError(f"duplicate model names in roster: {names}")

    def build(kind: str, pairs: list[ClaimPair]) -> ScoreMatrix:
        values = np.full((len(pairs), len(models)), np.nan)
        reasons: dict[tuple[int, int], str] = {}
        caches: list[dict[str, np.ndarray]] = [dict() for _ in models]

        def cell(i: int, j: int):
            pair = pairs[i]
            cache = caches[j]
            try:
                for text in (pair.claim_a.text, pair.claim_b.text):
                    if text not in cache:
                        cache[text] = models[j].embedder.embed(text)
                return cosine(cache[pair.claim_a.text], cache[pair.claim_b.text])
            except (UndefinedEmbeddingError, UndefinedSimilarityError) as exc:
                reasons[(i, j)] = exc.code
                return np.nan

        cells = [(i, j) for i in range(len(pairs)) for j in range(len(models))]
        if workers <= 1:
            results = [cell(i, j) for i, j in cells]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda c: cell(*c), cells))
        for (i, j), value in zip(cells, results):
            values[i, j] = value
        return ScoreMatrix(
            kind=kind,
            pair_labels=[p.interference_no for p in pairs],
            model_names=list(names),
            values=values,
            reasons=reasons,
        )

    return build("true", benchmark.true_pairs), build("random", benchmark.random_pairs)


def round_pct(x: float) -> int:
    """Integer percentage, .5 rounding away from zero (table convention)."""
    return int(math.floor(x + 0.5))


@dataclass
class WinRateRow:
    name: str
    family: str
    max_wins: int
    min_wins: int
    max_pct: int
    min_pct: int


@dataclass
class WinRateTable:
    rows: list[WinRateRow]
    denominator_true: int
    denominator_random: int
    ties_max: int
    ties_min: int
    excluded_true: list[str]
    excluded_random: list[str]


def _column_wins(values: np.ndarray, defined: np.ndarray, best: str) -> tuple[np.ndarray, int]:
    """Per-model strict win counts over defined rows, plus the tie count."""
    wins = np.zeros(values.shape[1], dtype=int)
    ties = 0
    for i in np.flatnonzero(defined):
        row = values[i]
        extreme = row.max() if best == "max" else row.min()
        winners = np.flatnonzero(row == extreme)
        if winners.size == 1:
            wins[winners[0]] += 1
        else:
            ties += 1
    return wins, ties


def win_rates(
    matrix_true: ScoreMatrix,
    matrix_random: ScoreMatrix,
    families: dict[str, str] | None = None,
) -> WinRateTable:
    """Strict argmax/argmin win percentages on the shared denominator."""
    if matrix_true.model_names != matrix_random.model_names:
        raise ParameterError("true and random matrices must share the model roster")
    if not matrix_true.model_names or matrix_true.values.size == 0 or matrix_random.values.size == 0:
        raise ParameterError("empty score matrix")

    defined_t = matrix_true.defined_rows()
    defined_r = matrix_random.defined_rows()
    wins_max, ties_max = _column_wins(matrix_true.values, defined_t, "max")
    wins_min, ties_min = _column_wins(matrix_random.values, defined_r, "min")
    denom_t = int(defined_t.sum())
    denom_r = int(defined_r.sum())

    rows = []
    for j, name in enumerate(matrix_true.model_names):
        rows.append(
            WinRateRow(
                name=name,
                family=(families or {}).get(name, ModelFamily.STATIC.value),
                max_wins=int(wins_max[j]),
                min_wins=int(wins_min[j]),
                max_pct=round_pct(100.0 * wins_max[j] / denom_t) if denom_t else 0,
                min_pct=round_pct(100.0 * wins_min[j] / denom_r) if denom_r else 0,
            )
        )
    return WinRateTable(
        rows=rows,
        denominator_true=denom_t,
        denominator_random=denom_r,
        ties_max=ties_max,
        ties_min=ties_min,
        excluded_true=[matrix_true.pair_labels[i] for i in np.flatnonzero(~defined_t)],
        excluded_random=[matrix_random.pair_labels[i] for i in np.flatnonzero(~defined_r)],
    )


def subset_table(
    matrix_true: ScoreMatrix,
    matrix_random: ScoreMatrix,
    names: list[str],
    families: dict[str, str] | None = None,
) -> WinRateTable:
    """Win rates recomputed over a restricted roster (never rescaled)."""
    return win_rates(matrix_true.restrict(names), matrix_random.restrict(names), families)


# ---------------------------------------------------------------------------
# Reports


def score_distributions(matrix: ScoreMatrix) -> dict[str, dict[str, float]]:
    """Per-model summary of defined scores (calibration diagnostics)."""
    out: dict[str, dict[str, float]] = {}
    for j, name in enumerate(matrix.model_names):
        col = matrix.values[:, j]
        col = col[~np.isnan(col)]
        if col.size == 0:
            out[name] = {"count": 0}
            continue
        q25, q50, q75 = np.percentile(col, [25, 50, 75])
        out[name] = {
            "count": int(col.size),
            "mean": round(float(col.mean()), 6),
            "std": round(float(col.std()), 6),
            "min": round(float(col.min()), 6),
            "q25": round(float(q25), 6),
            "median": round(float(q50), 6),
            "q75": round(float(q75), 6),
            "max": round(float(col.max()), 6),
        }
    return out


@dataclass
class EvalReport:
    tables: list[tuple[str, WinRateTable]]
    distributions: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    seeds: dict[str, int] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "version": 1,
            "seeds": self.seeds,
            "tables": [
                {
                    "title": title,
                    "denominator_true": t.denominator_true,
                    "denominator_random": t.denominator_random,
                    "ties_max": t.ties_max,
                    "ties_min": t.ties_min,
                    "excluded_true": t.excluded_true,
                    "excluded_random": t.excluded_random,
                    "models": [
                        {
                            "name": r.name,
                            "family": r.family,
                            "max_wins": r.max_wins,
                            "min_wins": r.min_wins,
                            "max_pct": r.max_pct,
                            "min_pct": r.min_pct,
                        }
                        for r in t.rows
                    ],
                }
                for title, t in self.tables
            ],
            "distributions": self.distributions,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "EvalReport":
        tables = []
        for entry in obj["tables"]:
            tables.append(
                (
                    entry["title"],
                    WinRateTable(
                        rows=[
                            WinRateRow(
                                name=m["name"],
                                family=m["family"],
                                max_wins=m["max_wins"],
                                min_wins=m["min_wins"],
                                max_pct=m["max_pct"],
                                min_pct=m["min_pct"],
                            )
                            for m in entry["models"]
                        ],
                        denominator_true=entry["denominator_true"],
                        denominator_random=entry["denominator_random"],
                        ties_max=entry["ties_max"],
                        ties_min=entry["ties_min"],
                        excluded_true=entry["excluded_true"],
                        excluded_random=entry["excluded_random"],
                    ),
                )
            )
        return cls(tables=tables, distributions=obj.get("distributions", {}), seeds=obj.get("seeds", {}))


_NAME_W = 28
_COL_W = 22


def _render_table_text(title: str, table: WinRateTable) -> str:
    width = _NAME_W + 2 * _COL_W
    lines = [title, "=" * width]
    lines.append(
        f"{'Model':<{_NAME_W}}{'Max similarity (%)':<{_COL_W}}{'Min similarity (%)':<{_COL_W}}".rstrip()
    )
    lines.append("-" * width)
    for r in table.rows:
        lines.append(f"{r.name:<{_NAME_W}}{r.max_pct:<{_COL_W}}{r.min_pct:<{_COL_W}}".rstrip())
    lines.append("-" * width)
    lines.append(
        f"denominators: true={table.denominator_true} random={table.denominator_random}"
        f"  ties: max={table.ties_max} min={table.ties_min}"
    )
    if table.excluded_true or table.excluded_random:
        lines.append(
            "excluded pairs: true=[%s] random=[%s]"
            % (", ".join(table.excluded_true), ", ".join(table.excluded_random))
        )
    return "\n".join(lines) + "\n"


def render_report(report: EvalReport, fmt: str = "text") -> bytes:
    """Deterministic, byte-stable rendering of the computed tables."""
    if fmt == "json":
        return (json.dumps(report.to_json_obj(), sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "table",
                "model",
                "family",
                "max_wins",
                "max_pct",
                "min_wins",
                "min_pct",
                "denominator_true",
                "denominator_random",
                "ties_max",
                "ties_min",
            ]
        )
        for title, table in report.tables:
            for r in table.rows:
                writer.writerow(
                    [
                        title,
                        r.name,
                        r.family,
                        r.max_wins,
                        r.max_pct,
                        r.min_wins,
                        r.min_pct,
                        table.denominator_true,
                        table.denominator_random,
                        table.ties_max,
                        table.ties_min,
                    ]
                )
        return buf.getvalue().encode("utf-8")
    if fmt == "text":
        blocks = [_render_table_text(title, table) for title, table in report.tables]
        if report.distributions:
            lines = ["score distributions (cosine over defined pairs)"]
            for kind in sorted(report.distributions):
                for name in sorted(report.distributions[kind]):
                    stats = report.distributions[kind][name]
                    desc = " ".join(f"{k}={stats[k]}" for k in sorted(stats))
                    lines.append(f"  [{kind}] {name}: {desc}")
            blocks.append("\n".join(lines) + "\n")
        if report.seeds:
            blocks.append(
                "seeds: " + " ".join(f"{k}={report.seeds[k]}" for k in sorted(report.seeds)) + "\n"
            )
        return "\n".join(blocks).encode("utf-8")
    raise ParameterError(f"unknown report format {fmt!r}")
