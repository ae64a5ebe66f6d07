"""Shared fixture builders for the test suite."""

from __future__ import annotations

from datetime import date
from pathlib import Path

import numpy as np
import pytest

from patsim.ingest import (
    AssignmentType,
    PatentCorpus,
    PatentRecord,
    PatentType,
    parse_cpc_symbol,
)

TOPICS = {
    "G06F16/9535": [f"search{i:02d}" for i in range(20)],
    "A61K38/17": [f"protein{i:02d}" for i in range(20)],
    "H04L12/28": [f"network{i:02d}" for i in range(20)],
    "B60R21/01": [f"airbag{i:02d}" for i in range(20)],
}
SYMBOLS = list(TOPICS)


def make_record(patent_id: str, symbol: str, year: int, abstract: str) -> PatentRecord:
    return PatentRecord(
        patent_id=patent_id,
        filing_date=date(year, 3, 14),
        abstract=abstract,
        patent_type=PatentType.UTILITY,
        cpc=(parse_cpc_symbol(patent_id, symbol, AssignmentType.INVENTIONAL),),
    )


def make_corpus(specs: list[tuple[str, str, int, str]]) -> PatentCorpus:
    """Corpus from (patent_id, cpc_symbol, filing_year, abstract) tuples."""
    return PatentCorpus(records={s[0]: make_record(*s) for s in specs})


def random_corpus(rng: np.random.Generator, n: int, n_symbols: int = 6, n_years: int = 3,
                  duplicate_abstract_rate: float = 0.05) -> PatentCorpus:
    """Synthetic corpus with group collisions and occasional continuations."""
    symbols = [f"G{d:02d}F{g}/00" for d, g in zip(range(n_symbols), range(10, 10 + n_symbols))]
    specs = []
    abstracts: list[str] = []
    for i in range(n):
        symbol = symbols[int(rng.integers(n_symbols))]
        year = 2005 + int(rng.integers(n_years))
        if abstracts and rng.random() < duplicate_abstract_rate:
            abstract = abstracts[int(rng.integers(len(abstracts)))]
        else:
            abstract = f"Abstract body {int(rng.integers(10 ** 9))} for item {i}."
        abstracts.append(abstract)
        specs.append((f"P{i:06d}", symbol, year, abstract))
    return make_corpus(specs)


def abstract_for(rng: np.random.Generator, symbol: str, n_words: int = 12) -> str:
    words = rng.choice(TOPICS[symbol], size=n_words)
    return "A device comprising " + " ".join(words) + "."


def write_pipeline_fixture(root: Path, n_patents: int = 60, n_cases: int = 6,
                           seed: int = 99) -> Path:
    """Patents View-style dump fixture plus an interference table and config.

    Returns the config path; all inputs land under root/fixtures and all
    outputs under root/out.
    """
    rng = np.random.default_rng(seed)
    fixtures = root / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    (root / "out").mkdir(exist_ok=True)

    cpc = ["patent_id\tcpc_group\tcpc_type"]
    app = ["patent_id\tfiling_date"]
    pat = ["patent_id\tpatent_type\tpatent_abstract"]
    for i in range(n_patents):
        pid = f"P{i:04d}"
        symbol = SYMBOLS[i % len(SYMBOLS)]
        year = 2010 + (i % 2)
        cpc.append(f"{pid}\t{symbol}\tinventional")
        app.append(f"{pid}\t{year}-03-{1 + i % 27:02d}")
        pat.append(f"{pid}\tutility\t{abstract_for(rng, symbol)}")
    # rows every filter stage must drop
    cpc += [
        "PDUAL\tG06F16/9535\tinventional",
        "PDUAL\tA61K38/17\tinventional",
        "PADD\tG06F16/9535\tadditional",
        "PNONU\tG06F16/9535\tinventional",
        "PNOAB\tG06F16/9535\tinventional",
        "PNODATE\tG06F16/9535\tinventional",
    ]
    for pid in ("PDUAL", "PADD", "PNONU", "PNOAB"):
        app.append(f"{pid}\t2010-05-05")
    pat += [
        "PDUAL\tutility\tdual assignment body",
        "PADD\tutility\tadditional assignment body",
        "PNONU\tdesign\tdesign body",
        "PNOAB\tutility\t",
        "PNODATE\tutility\tno date body",
    ]

    claims = ["patent_id\tclaim_sequence\tclaim_text\tdependent"]
    cases = ["interference_no\tapplication_id\tfiling_date"]
    for c in range(n_cases):
        no = f"10{c:04d}"
        app_a, app_b = f"APP{c}A", f"APP{c}B"
        year = 2002 + (c % 12)
        cases.append(f"{no}\t{app_a}\t{year}-06-01")
        cases.append(f"{no}\t{app_b}\t{year}-07-01")
        symbol = SYMBOLS[c % len(SYMBOLS)]
        shared = " ".join(rng.choice(TOPICS[symbol], size=9))
        for side, app_id in (("first", app_a), ("second", app_b)):
            other = " ".join(rng.choice(TOPICS[symbol], size=4))
            claims.append(
                f"{app_id}\t1\tAn apparatus of the {side} party using {shared} with {other}.\t"
            )
            claims.append(
                f"{app_id}\t2\tA variant combining "
                f"{' '.join(rng.choice(TOPICS[SYMBOLS[(c + 1) % len(SYMBOLS)]], size=8))}.\t"
            )
            claims.append(f"{app_id}\t3\tThe device of claim 1, wherein it is blue.\t1")
            claims.append(f"{app_id}\t4\t(canceled)\t")
    cases += [
        "999001\tOLDA\t1999-01-01",
        "999001\tOLDB\t2003-01-01",
        "999002\tTRIA\t2005-01-01",
        "999002\tTRIB\t2005-01-01",
        "999002\tTRIC\t2005-01-01",
        "999003\tNOCA\t2006-01-01",
        "999003\tNOCB\t2006-01-01",
    ]
    claims.append("NOCA\t1\tA lonely claim standing alone.\t")

    (fixtures / "g_cpc_current.tsv").write_text("\n".join(cpc) + "\n", encoding="utf-8")
    (fixtures / "g_application.tsv").write_text("\n".join(app) + "\n", encoding="utf-8")
    (fixtures / "g_patent.tsv").write_text("\n".join(pat) + "\n", encoding="utf-8")
    (fixtures / "pg_claims.tsv").write_text("\n".join(claims) + "\n", encoding="utf-8")
    (fixtures / "interferences.tsv").write_text("\n".join(cases) + "\n", encoding="utf-8")

    config = f"""
master_seed = 42
ingest.cpc = {fixtures}/g_cpc_current.tsv
ingest.applications = {fixtures}/g_application.tsv
ingest.patents = {fixtures}/g_patent.tsv
ingest.claims = {fixtures}/pg_claims.tsv
ingest.corpus = {root}/out/corpus.tsv
ingest.provenance = {root}/out/ingest_prov.txt
triplets.file = {root}/out/triplets.tsv
triplets.sample_fraction = 0.5
triplets.train_fraction = 0.70
triplets.train_manifest = {root}/out/train.idx
triplets.validation_manifest = {root}/out/validation.idx
triplets.split_meta = {root}/out/split.json
triplets.provenance = {root}/out/triplets_prov.txt
bench.cases = {fixtures}/interferences.tsv
bench.file = {root}/out/bench.tsv
bench.provenance = {root}/out/bench_prov.txt
bench.reference = stub:16
w2v.dim = 24
w2v.window = 3
w2v.epochs = 3
w2v.min_count = 1
w2v.checkpoint = {root}/out/w2v.ckpt
dbow.dim = 24
dbow.epochs = 40
dbow.min_count = 1
dbow.inference_epochs = 20
dbow.checkpoint = {root}/out/dbow.ckpt
eval.models = w2v-tfidf=w2v, dbow=dbow, stub-a=stub:16, stub-b=stub:12
eval.subset = stub-a,stub-b
eval.report_json = {root}/out/eval.json
eval.report_text = {root}/out/eval.txt
eval.report_csv = {root}/out/eval.csv
"""
    config_path = root / "config.txt"
    config_path.write_text(config, encoding="utf-8")
    return config_path


@pytest.fixture
def pipeline_config(tmp_path) -> Path:
    return write_pipeline_fixture(tmp_path)
