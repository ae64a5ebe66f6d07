"""Command line entry point.

One executable, one flat config file, explicit seeds.  Subcommands:

    ingest      three Patents View-style tables -> clean corpus file
    triplets    corpus -> triplet file + sample/split manifests
    bench       interference cases + claims -> benchmark file
    train-w2v   corpus -> word2vec TF-IDF checkpoint
    train-dbow  corpus -> PV-DBOW checkpoint
    embed       texts -> PATSIM-VECS file under a chosen model
    eval        benchmark + model roster -> win-rate reports
    report      re-render a JSON eval report as text or csv

Logs are line-delimited key=value records on stdout; every command
prints its resolved seed chain.  Exit codes: 0 ok, 2 configuration or
parameter problems, 1 runtime failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from . import formats, ingest, triplets
from .config import RunConfig
from .embedding import (
    DbowParams,
    HashEmbedder,
    SgnsParams,
    fit_w2v_tfidf,
    text_key,
    tokenize,
    train_dbow,
)
from .embedding.checkpoint import load_checkpoint, save_dbow, save_w2v_tfidf
from .errors import ConfigError, ParameterError, PatsimError
from .evaluation import (
    EvalReport,
    ModelEntry,
    ModelFamily,
    render_report,
    score_all,
    score_distributions,
    subset_table,
    win_rates,
)


def log_kv(event: str, **fields) -> None:
    parts = [f"event={event}"]
    parts += [f"{key}={value}" for key, value in fields.items()]
    print(" ".join(parts))


def log_seeds(cfg: RunConfig, *stages: str) -> None:
    chain = {stage: cfg.seed_for(stage) for stage in stages}
    log_kv("seeds", master=cfg.master_seed, **chain)


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.entries["master_seed"] = str(args.seed)
    if getattr(args, "workers", None) is not None:
        cfg.entries["workers"] = str(args.workers)
    if getattr(args, "deterministic", None):
        cfg.entries["deterministic"] = "true"
    return cfg


def embedder_from_spec(spec: str, cfg: RunConfig, salt: str):
    """Build an embedder from a ``kind[:arg]`` spec string.

    stub[:dim]  deterministic hash embedder (salted by the model name)
    vecs:path   PATSIM-VECS file, text-key lookup
    w2v[:path]  word2vec TF-IDF checkpoint (default from config)
    dbow[:path] PV-DBOW checkpoint (default from config)
    """
    kind, _, arg = spec.partition(":")
    kind = kind.strip()
    if kind == "stub":
        dim = int(arg) if arg else 16
        return HashEmbedder(dim=dim, salt=salt), ModelFamily.STATIC
    if kind == "vecs":
        if not arg:
            raise ConfigError("vecs embedder needs a path: vecs:<file>")
        if not Path(arg).exists():
            raise ConfigError(f"vector file {arg} does not exist")
        return formats.read_vectors(arg), ModelFamily.CONTEXTUAL
    if kind in ("w2v", "dbow"):
        path = arg or cfg.get(f"{kind}.checkpoint")
        if not path:
            raise ConfigError(f"{kind} embedder needs a checkpoint path")
        if not Path(path).exists():
            raise ConfigError(f"checkpoint {path} does not exist")
        return load_checkpoint(path), ModelFamily.STATIC
    raise ConfigError(f"unknown embedder kind {kind!r}")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_ingest(args) -> int:
    cfg = _load_config(args)
    cols = cfg.column_map()
    cpc_path = cfg.input_path("ingest.cpc")
    app_path = cfg.input_path("ingest.applications")
    pat_path = cfg.input_path("ingest.patents")
    corpus_path = cfg.output_path("ingest.corpus")
    prov_path = cfg.output_path("ingest.provenance")
    log_seeds(cfg)

    cpc_reader = ingest.parse_table(ingest.open_text(cpc_path), ingest.cpc_schema(cols))
    app_reader = ingest.parse_table(ingest.open_text(app_path), ingest.application_schema(cols))
    pat_reader = ingest.parse_table(ingest.open_text(pat_path), ingest.patent_schema(cols))
    corpus = ingest.build_clean_corpus(
        cpc_reader, app_reader, pat_reader, utility_value=cols.utility_value
    )
    formats.write_corpus(corpus, corpus_path)

    counters = dict(corpus.provenance)
    for label, reader in (("cpc", cpc_reader), ("applications", app_reader), ("patents", pat_reader)):
        counters[f"{label}.read"] = reader.counters.read
        counters[f"{label}.yielded"] = reader.counters.yielded
        counters[f"{label}.malformed"] = reader.counters.malformed
    formats.write_provenance(counters, prov_path, prefix="ingest.")
    log_kv("ingest.done", corpus=corpus_path, kept=len(corpus), **{
        stage: corpus.provenance[stage] for stage in ingest.FILTER_STAGES
    })
    return 0


def cmd_triplets(args) -> int:
    cfg = _load_config(args)
    corpus_path = cfg.input_path("ingest.corpus")
    out_path = cfg.output_path("triplets.file")
    train_path = cfg.output_path("triplets.train_manifest")
    val_path = cfg.output_path("triplets.validation_manifest")
    meta_path = cfg.output_path("triplets.split_meta")
    prov_path = cfg.output_path("triplets.provenance")
    sample_fraction = cfg.get_float("triplets.sample_fraction", 0.10)
    train_fraction = cfg.get_float("triplets.train_fraction", 0.70)
    seed = cfg.seed_for("triplets")
    log_seeds(cfg, "triplets")

    corpus = formats.read_corpus(corpus_path)
    groups = triplets.group_corpus(corpus)
    pair_stream = triplets.enumerate_pairs(groups, corpus)
    all_triplets = list(
        triplets.attach_negatives(pair_stream, corpus, seed, workers=cfg.workers)
    )
    formats.write_triplets(all_triplets, seed, out_path)
    split = triplets.sample_and_split(
        all_triplets, sample_fraction, (train_fraction, 1.0 - train_fraction), seed
    )
    formats.write_split_manifests(split, all_triplets, train_path, val_path, meta_path)

    counters = {
        "groups": len(groups),
        "grouped_patents": sum(len(ids) for ids in groups.values()),
        "pairs_total": pair_stream.counters.pairs_total,
        "continuation_excluded": pair_stream.counters.continuation_excluded,
        "pairs_kept": pair_stream.counters.yielded,
        "triplets": len(all_triplets),
        "sampled": len(split.train) + len(split.validation),
        "train": len(split.train),
        "validation": len(split.validation),
    }
    formats.write_provenance(counters, prov_path, prefix="triplets.")
    log_kv("triplets.done", file=out_path, **counters)
    return 0


def cmd_bench(args) -> int:
    cfg = _load_config(args)
    cols = cfg.column_map()
    cases_path = cfg.input_path("bench.cases")
    claims_paths = cfg.input_paths("ingest.claims")
    out_path = cfg.output_path("bench.file")
    prov_path = cfg.output_path("bench.provenance")
    window = (cfg.get_int("bench.window_start", 2001), cfg.get_int("bench.window_end", 2014))
    reference_spec = cfg.get("bench.reference", "stub")
    delimiter = cfg.get("bench.cases_delimiter", "\t")
    seed = cfg.seed_for("bench")
    log_seeds(cfg, "bench")

    reference, _ = embedder_from_spec(reference_spec, cfg, salt="reference")
    claims_index, claim_counters = ingest.load_claims_index(claims_paths, cols)
    case_reader = bench_mod.parse_case_rows(ingest.open_text(cases_path), cols, delimiter)
    dataset = bench_mod.build_benchmark(
        case_reader,
        claims_index,
        reference,
        seed,
        window=window,
        reference_label=reference_spec,
    )
    formats.write_benchmark(dataset, out_path)
    counters = dict(dataset.provenance or {})
    counters["claims.read"] = claim_counters.read
    counters["claims.yielded"] = claim_counters.yielded
    counters["claims.malformed"] = claim_counters.malformed
    formats.write_provenance(counters, prov_path, prefix="bench.")
    log_kv(
        "bench.done",
        file=out_path,
        true_pairs=len(dataset.true_pairs),
        random_pairs=len(dataset.random_pairs),
        **{stage: counters[stage] for stage in bench_mod.FUNNEL_STAGES},
    )
    return 0


def _corpus_tokens(corpus) -> tuple[list[str], list[list[str]]]:
    ids = sorted(corpus.records)
    return ids, [tokenize(corpus.records[i].abstract) for i in ids]


def cmd_train_w2v(args) -> int:
    cfg = _load_config(args)
    corpus_path = cfg.input_path("ingest.corpus")
    ckpt_path = cfg.output_path("w2v.checkpoint")
    params = SgnsParams(
        dim=cfg.get_int("w2v.dim", 300),
        window=cfg.get_int("w2v.window", 5),
        negatives=cfg.get_int("w2v.negatives", 5),
        epochs=cfg.get_int("w2v.epochs", 5),
        lr_initial=cfg.get_float("w2v.lr_initial", 0.025),
        lr_final=cfg.get_float("w2v.lr_final", 0.0001),
        min_count=cfg.get_int("w2v.min_count", 5),
        seed=cfg.seed_for("w2v"),
    )
    log_seeds(cfg, "w2v")
    corpus = formats.read_corpus(corpus_path)
    _, docs = _corpus_tokens(corpus)
    model = fit_w2v_tfidf(docs, params)
    save_w2v_tfidf(model, ckpt_path)
    log_kv(
        "train-w2v.done",
        checkpoint=ckpt_path,
        vocab=len(model.vocab),
        dim=model.dim,
        docs=len(docs),
    )
    return 0


def cmd_train_dbow(args) -> int:
    cfg = _load_config(args)
    corpus_path = cfg.input_path("ingest.corpus")
    ckpt_path = cfg.output_path("dbow.checkpoint")
    params = DbowParams(
        dim=cfg.get_int("dbow.dim", 300),
        negatives=cfg.get_int("dbow.negatives", 5),
        epochs=cfg.get_int("dbow.epochs", 10),
        lr_initial=cfg.get_float("dbow.lr_initial", 0.025),
        lr_final=cfg.get_float("dbow.lr_final", 0.0001),
        min_count=cfg.get_int("dbow.min_count", 5),
        inference_epochs=cfg.get_int("dbow.inference_epochs", 10),
        seed=cfg.seed_for("dbow"),
    )
    log_seeds(cfg, "dbow")
    corpus = formats.read_corpus(corpus_path)
    ids, docs = _corpus_tokens(corpus)
    model = train_dbow(list(zip(ids, docs)), params)
    save_dbow(model, ckpt_path)
    log_kv(
        "train-dbow.done",
        checkpoint=ckpt_path,
        vocab=len(model.vocab),
        dim=model.dim,
        docs=len(ids),
        skipped_empty=model.skipped_empty,
    )
    return 0


def cmd_embed(args) -> int:
    cfg = _load_config(args)
    embedder, _ = embedder_from_spec(args.model, cfg, salt=args.model)
    input_path = Path(args.input)
    if not input_path.exists():
        raise ConfigError(f"input file {input_path} does not exist")
    log_seeds(cfg)

    entries = []
    with open(input_path, "r", encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ParameterError(f"{input_path}:{lineno}: expected id<TAB>text")
            text_id, text = line.split("\t", 1)
            key = text_key(text) if args.key_by == "text" else text_id
            entries.append((key, embedder.embed(text)))
    formats.write_vectors(entries, args.output, source=args.model.replace(" ", "_"))
    log_kv("embed.done", output=args.output, count=len(entries), model=args.model)
    return 0


def _build_roster(cfg: RunConfig) -> list[ModelEntry]:
    roster = []
    for name, kind, arg in cfg.model_roster():
        spec = f"{kind}:{arg}" if arg else kind
        embedder, family = embedder_from_spec(spec, cfg, salt=name)
        roster.append(ModelEntry(name=name, embedder=embedder, family=family))
    return roster


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    bench_path = cfg.input_path("bench.file")
    json_path = cfg.output_path("eval.report_json")
    roster = _build_roster(cfg)
    subset_names = [
        n.strip() for n in (cfg.get("eval.subset") or "").split(",") if n.strip()
    ]
    log_seeds(cfg, "bench", "triplets")

    dataset = formats.read_benchmark(bench_path)
    matrix_true, matrix_random = score_all(roster, dataset, workers=cfg.workers)
    families = {m.name: m.family.value for m in roster}
    tables = [
        (
            "Percentage of cases of greatest and lowest similarity by model (all)",
            win_rates(matrix_true, matrix_random, families),
        )
    ]
    if subset_names:
        tables.append(
            (
                "Percentage of cases of greatest and lowest similarity by model (subset)",
                subset_table(matrix_true, matrix_random, subset_names, families),
            )
        )
    report = EvalReport(
        tables=tables,
        distributions={
            "true": score_distributions(matrix_true),
            "random": score_distributions(matrix_random),
        },
        seeds={"master": cfg.master_seed, "bench": dataset.seed},
    )
    Path(json_path).write_bytes(render_report(report, "json"))
    for key, fmt in (("eval.report_text", "text"), ("eval.report_csv", "csv")):
        if cfg.get(key):
            cfg.output_path(key).write_bytes(render_report(report, fmt))
    if args.format:
        sys.stdout.write(render_report(report, args.format).decode("utf-8"))
    table = tables[0][1]
    log_kv(
        "eval.done",
        report=json_path,
        models=len(roster),
        denominator_true=table.denominator_true,
        denominator_random=table.denominator_random,
    )
    return 0


def cmd_report(args) -> int:
    input_path = Path(args.input)
    if not input_path.exists():
        raise ConfigError(f"report input {input_path} does not exist")
    report = EvalReport.from_json_obj(json.loads(input_path.read_text(encoding="utf-8")))
    payload = render_report(report, args.format or "text")
    if args.output:
        Path(args.output).write_bytes(payload)
        log_kv("report.done", output=args.output, format=args.format or "text")
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="flat key=value config file")
        p.add_argument("--seed", type=int, help="override master_seed")
        p.add_argument("--workers", type=int, help="intra-stage parallelism")
        p.add_argument(
            "--deterministic",
            action="store_true",
            help="force single-worker deterministic mode",
        )

    common(sub.add_parser("ingest", help="build the clean corpus"))
    common(sub.add_parser("triplets", help="build the triplet dataset"))
    common(sub.add_parser("bench", help="build the interference benchmark"))
    common(sub.add_parser("train-w2v", help="train the word2vec TF-IDF model"))
    common(sub.add_parser("train-dbow", help="train the PV-DBOW model"))

    p_embed = sub.add_parser("embed", help="embed id<TAB>text lines into a vector file")
    common(p_embed)
    p_embed.add_argument("--model", required=True, help="embedder spec, e.g. w2v or stub:16")
    p_embed.add_argument("--input", required=True, help="TSV of id<TAB>text")
    p_embed.add_argument("--output", required=True, help="PATSIM-VECS output path")
    p_embed.add_argument(
        "--key-by",
        choices=("id", "text"),
        default="id",
        help="vector id column: the given id, or the text content key",
    )

    p_eval = sub.add_parser("eval", help="score the benchmark and render reports")
    common(p_eval)
    p_eval.add_argument("--format", choices=("text", "csv", "json"), help="also print to stdout")

    p_report = sub.add_parser("report", help="re-render a JSON eval report")
    p_report.add_argument("--input", required=True, help="eval report JSON")
    p_report.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p_report.add_argument("--output", help="write here instead of stdout")

    return parser


_COMMANDS = {
    "ingest": cmd_ingest,
    "triplets": cmd_triplets,
    "bench": cmd_bench,
    "train-w2v": cmd_train_w2v,
    "train-dbow": cmd_train_dbow,
    "embed": cmd_embed,
    "eval": cmd_eval,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ParameterError) as exc:
        print(f"error code={exc.code} stage={args.command} msg={exc}", file=sys.stderr)
        return 2
    except PatsimError as exc:
        print(f"error code={exc.code} stage={args.command} msg={exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
