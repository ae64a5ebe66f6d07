#!/usr/bin/env python3
"""Generate a desk-scale synthetic dataset and a ready-to-run config.

Writes Patents View-style dumps (CPC assignments, applications, patents,
pre-grant claims), an interference case table, and a patsim config under
the chosen directory.  The texts are drawn from per-CPC topic
vocabularies so trained static models have real signal to find.

Usage:
    python scripts/make_fixtures.py --out demo [--patents 400] [--cases 12] [--seed 7]
    patsim ingest --config demo/config.txt
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

TOPICS = {
    "G06F16/9535": ["query", "index", "ranking", "crawler", "cache", "token", "lookup",
                    "snippet", "relevance", "corpus", "latency", "shard", "filter", "facet"],
    "A61K38/17": ["protein", "peptide", "antibody", "ligand", "receptor", "dosage",
                  "sequence", "binding", "assay", "therapeutic", "epitope", "serum"],
    "H04L12/28": ["packet", "router", "gateway", "bandwidth", "ethernet", "frame",
                  "switch", "topology", "multicast", "latency", "buffer", "uplink"],
    "B60R21/01": ["airbag", "sensor", "crash", "inflator", "deployment", "occupant",
                  "restraint", "collision", "trigger", "module", "severity", "seat"],
    "F03D7/02": ["turbine", "rotor", "blade", "pitch", "generator", "nacelle",
                 "yaw", "wind", "torque", "controller", "gearbox", "tower"],
}
SYMBOLS = list(TOPICS)


def sentence(rng, symbol, n=14) -> str:
    words = rng.choice(TOPICS[symbol], size=n)
    return "A system comprising " + " ".join(words) + "."


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo", help="output directory")
    parser.add_argument("--patents", type=int, default=400)
    parser.add_argument("--cases", type=int, default=12)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    root = Path(args.out)
    fixtures = root / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    (root / "out").mkdir(exist_ok=True)

    cpc = ["patent_id\tcpc_group\tcpc_type"]
    app = ["patent_id\tfiling_date"]
    pat = ["patent_id\tpatent_type\tpatent_abstract"]
    for i in range(args.patents):
        pid = f"P{i:06d}"
        symbol = SYMBOLS[int(rng.integers(len(SYMBOLS)))]
        year = 2008 + int(rng.integers(4))
        month = 1 + int(rng.integers(12))
        day = 1 + int(rng.integers(28))
        cpc.append(f"{pid}\t{symbol}\tinventional")
        app.append(f"{pid}\t{year}-{month:02d}-{day:02d}")
        pat.append(f"{pid}\tutility\t{sentence(rng, symbol)}")

    claims = ["patent_id\tclaim_sequence\tclaim_text\tdependent"]
    cases = ["interference_no\tapplication_id\tfiling_date"]
    for c in range(args.cases):
        no = f"105{c:03d}"
        year = 2001 + int(rng.integers(14))
        symbol = SYMBOLS[c % len(SYMBOLS)]
        shared = " ".join(rng.choice(TOPICS[symbol], size=10))
        for side in "AB":
            app_id = f"IF{c:03d}{side}"
            cases.append(f"{no}\t{app_id}\t{year}-0{1 + int(rng.integers(9))}-15")
            twist = " ".join(rng.choice(TOPICS[symbol], size=4))
            claims.append(
                f"{app_id}\t1\tAn apparatus wherein {shared} together with {twist}.\t"
            )
            other_topic = SYMBOLS[(c + 1) % len(SYMBOLS)]
            claims.append(
                f"{app_id}\t2\tA method employing "
                f"{' '.join(rng.choice(TOPICS[other_topic], size=9))}.\t"
            )
            claims.append(f"{app_id}\t3\tThe apparatus of claim 1 painted blue.\t1")
            claims.append(f"{app_id}\t4\t(canceled)\t")

    (fixtures / "g_cpc_current.tsv").write_text("\n".join(cpc) + "\n", encoding="utf-8")
    (fixtures / "g_application.tsv").write_text("\n".join(app) + "\n", encoding="utf-8")
    (fixtures / "g_patent.tsv").write_text("\n".join(pat) + "\n", encoding="utf-8")
    (fixtures / "pg_claims.tsv").write_text("\n".join(claims) + "\n", encoding="utf-8")
    (fixtures / "interferences.tsv").write_text("\n".join(cases) + "\n", encoding="utf-8")

    config = f"""# patsim demo configuration (generated by make_fixtures.py)
master_seed = 42
deterministic = true

ingest.cpc = {fixtures}/g_cpc_current.tsv
ingest.applications = {fixtures}/g_application.tsv
ingest.patents = {fixtures}/g_patent.tsv
ingest.claims = {fixtures}/pg_claims.tsv
ingest.corpus = {root}/out/corpus.tsv
ingest.provenance = {root}/out/ingest_provenance.txt

triplets.file = {root}/out/triplets.tsv
triplets.sample_fraction = 0.10
triplets.train_fraction = 0.70
triplets.train_manifest = {root}/out/train.idx
triplets.validation_manifest = {root}/out/validation.idx
triplets.split_meta = {root}/out/split.json
triplets.provenance = {root}/out/triplets_provenance.txt

bench.cases = {fixtures}/interferences.tsv
bench.file = {root}/out/bench.tsv
bench.provenance = {root}/out/bench_provenance.txt
bench.window_start = 2001
bench.window_end = 2014
bench.reference = stub:16

w2v.dim = 48
w2v.window = 5
w2v.negatives = 5
w2v.epochs = 4
w2v.min_count = 2
w2v.checkpoint = {root}/out/w2v.ckpt

dbow.dim = 48
dbow.negatives = 5
dbow.epochs = 60
dbow.min_count = 2
dbow.inference_epochs = 30
dbow.checkpoint = {root}/out/dbow.ckpt

eval.models = w2v-tfidf=w2v, dbow=dbow, stub=stub:16
eval.report_json = {root}/out/eval.json
eval.report_text = {root}/out/eval.txt
eval.report_csv = {root}/out/eval.csv
"""
    (root / "config.txt").write_text(config, encoding="utf-8")
    print(f"fixtures and config written under {root}/")
    print(f"next: patsim ingest --config {root}/config.txt")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
