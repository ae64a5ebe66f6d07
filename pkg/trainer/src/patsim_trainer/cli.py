"""Trainer command line.

    patsim-trainer make-tiny-base --triplets t.tsv --out base/
    patsim-trainer finetune --base base/ --triplets t.tsv \
        --train-manifest train.idx --validation-manifest val.idx \
        --out ckpt/ --log train.log [--epochs 1 --batch-size 8 ...]
    patsim-trainer export --checkpoint ckpt/ --bench bench.tsv --out claims.vecs
    patsim-trainer export --checkpoint ckpt/ --texts texts.tsv --out t.vecs --key-by id
"""

from __future__ import annotations

import argparse
import sys

from .formats import read_bench_claims, read_texts_tsv, read_triplets, text_key
from .model import make_tiny_base
from .train import TrainJob, TripletLossConfig, export_vectors_for, finetune


def cmd_make_tiny_base(args) -> int:
    triplets = read_triplets(args.triplets)
    texts = [t for trip in triplets for t in (trip.anchor, trip.positive, trip.negative)]
    out = make_tiny_base(
        texts,
        args.out,
        hidden_size=args.hidden_size,
        num_layers=args.layers,
        num_heads=args.heads,
        vocab_limit=args.vocab_limit,
        seed=args.seed,
    )
    print(f"event=make-tiny-base.done checkpoint={out} hidden={args.hidden_size}")
    return 0


def cmd_finetune(args) -> int:
    config = TripletLossConfig(
        margin=args.margin,
        batch_size=args.batch_size,
        epochs=args.epochs,
        validation_every=args.validation_every,
        max_length=args.max_length,
        learning_rate=args.learning_rate,
        seed=args.seed,
        max_triplets=args.max_triplets,
    )
    job = TrainJob(
        base_checkpoint=args.base,
        triplets_path=args.triplets,
        train_manifest=args.train_manifest,
        validation_manifest=args.validation_manifest,
        output_dir=args.out,
        log_path=args.log,
        config=config,
    )
    result = finetune(job)
    print(
        f"event=finetune.done checkpoint={result.checkpoint_dir} "
        f"accuracy_before={result.accuracy_before:.4f} "
        f"accuracy_after={result.accuracy_after:.4f} log={args.log}"
    )
    return 0


def cmd_export(args) -> int:
    if bool(args.bench) == bool(args.texts):
        print("error: provide exactly one of --bench / --texts", file=sys.stderr)
        return 2
    if args.bench:
        entries = read_bench_claims(args.bench)  # already text-keyed
    else:
        entries = read_texts_tsv(args.texts)
        if args.key_by == "text":
            entries = [(text_key(text), text) for _, text in entries]
    count = export_vectors_for(
        args.checkpoint,
        entries,
        args.out,
        batch_size=args.batch_size,
        max_length=args.max_length,
        source=args.source,
    )
    print(f"event=export.done output={args.out} count={count}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patsim-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-tiny-base", help="build a small offline base checkpoint")
    p.add_argument("--triplets", required=True, help="PATSIM-TRIPLETS file for the vocabulary")
    p.add_argument("--out", required=True)
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=2)
    p.add_argument("--vocab-limit", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("finetune", help="triplet-loss fine-tuning")
    p.add_argument("--base", required=True, help="base checkpoint (hub id or local dir)")
    p.add_argument("--triplets", required=True)
    p.add_argument("--train-manifest", required=True)
    p.add_argument("--validation-manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log", required=True)
    p.add_argument("--margin", type=float, default=5.0)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--validation-every", type=int, default=1000)
    p.add_argument("--max-length", type=int, default=128)
    p.add_argument("--learning-rate", type=float, default=2e-5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-triplets", type=int, default=None)

    p = sub.add_parser("export", help="encode texts into a PATSIM-VECS file")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--bench", help="PATSIM-BENCH file: export all claim texts, text-keyed")
    p.add_argument("--texts", help="id<TAB>text file")
    p.add_argument("--out", required=True)
    p.add_argument("--key-by", choices=("id", "text"), default="id")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--max-length", type=int, default=128)
    p.add_argument("--source", help="source label (defaults to checkpoint name)")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    commands = {
        "make-tiny-base": cmd_make_tiny_base,
        "finetune": cmd_finetune,
        "export": cmd_export,
    }
    return commands[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
