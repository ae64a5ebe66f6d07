"""Triplet-loss fine-tuning of a transformer sentence encoder.

Per-sample loss: max(||f(a)-f(p)||_2 - ||f(a)-f(n)||_2 + margin, 0)
with mean-pooled sentence vectors and margin 5 by default.  Defaults
mirror the training protocol the triplet dataset was built for: batch
size 8, 1 epoch, a validation pass every 1,000 steps over the 30%
validation split.  Optimizer and learning-rate schedule are not pinned
by that protocol; the defaults here (AdamW, 10% linear warmup then
linear decay) follow sentence-encoder convention and every value is
recorded in the training log.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch.utils.data import DataLoader

from .formats import TripletTexts, read_manifest, read_triplets
from .model import encode_texts, load_encoder, mean_pool


@dataclass(frozen=True)
class TripletLossConfig:
    margin: float = 5.0
    distance: str = "euclidean"
    pooling: str = "mean"
    batch_size: int = 8
    epochs: int = 1
    validation_every: int = 1000
    max_length: int = 128
    learning_rate: float = 2e-5
    warmup_fraction: float = 0.1
    seed: int = 42
    max_triplets: int | None = None  # desk-scale truncation

    def validate(self) -> None:
        if self.margin <= 0:
            raise ValueError("margin must be > 0")
        if self.distance != "euclidean" or self.pooling != "mean":
            raise ValueError("only euclidean distance with mean pooling is supported")


@dataclass
class TrainJob:
    base_checkpoint: str
    triplets_path: str
    train_manifest: str
    validation_manifest: str
    output_dir: str
    log_path: str
    config: TripletLossConfig = field(default_factory=TripletLossConfig)


def triplet_loss(
    anchor: torch.Tensor, positive: torch.Tensor, negative: torch.Tensor, margin: float
) -> torch.Tensor:
    """Per-sample hinge on the euclidean distance gap; always >= 0."""
    d_ap = torch.norm(anchor - positive, p=2, dim=1)
    d_an = torch.norm(anchor - negative, p=2, dim=1)
    return torch.clamp(d_ap - d_an + margin, min=0.0)


def _embed_batch(model, tokenizer, texts: list[str], max_length: int) -> torch.Tensor:
    enc = tokenizer(
        texts, padding=True, truncation=True, max_length=max_length, return_tensors="pt"
    )
    out = model(**enc)
    return mean_pool(out.last_hidden_state, enc["attention_mask"])


def evaluate_triplets(
    model, tokenizer, triplets: list[TripletTexts], config: TripletLossConfig
) -> tuple[float, float]:
    """(mean loss, triplet accuracy) on a held-out set, inference mode."""
    if not triplets:
        raise ValueError("empty validation set")
    model.eval()
    losses = []
    correct = 0
    with torch.no_grad():
        for lo in range(0, len(triplets), config.batch_size):
            batch = triplets[lo : lo + config.batch_size]
            a = _embed_batch(model, tokenizer, [t.anchor for t in batch], config.max_length)
            p = _embed_batch(model, tokenizer, [t.positive for t in batch], config.max_length)
            n = _embed_batch(model, tokenizer, [t.negative for t in batch], config.max_length)
            losses.append(triplet_loss(a, p, n, config.margin))
            d_ap = torch.norm(a - p, p=2, dim=1)
            d_an = torch.norm(a - n, p=2, dim=1)
            correct += int((d_ap < d_an).sum())
    all_losses = torch.cat(losses)
    return float(all_losses.mean()), correct / len(triplets)


@dataclass
class TrainResult:
    checkpoint_dir: Path
    accuracy_before: float
    accuracy_after: float
    batch_losses: list[float]
    log_lines: list[str]


def finetune(job: TrainJob) -> TrainResult:
    """Fine-tune, validating on schedule, and save the checkpoint."""
    config = job.config
    config.validate()
    torch.manual_seed(config.seed)

    all_triplets = read_triplets(job.triplets_path)
    train_idx = read_manifest(job.train_manifest)
    val_idx = read_manifest(job.validation_manifest)
    train = [all_triplets[i] for i in train_idx]
    validation = [all_triplets[i] for i in val_idx]
    if config.max_triplets is not None:
        train = train[: config.max_triplets]
        validation = validation[: max(1, config.max_triplets * 3 // 7)]

    tokenizer, model = load_encoder(job.base_checkpoint)
    model.train()
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    loader = DataLoader(
        list(range(len(train))),
        batch_size=config.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(config.seed),
    )
    total_steps = max(1, config.epochs * len(loader))
    warmup = max(1, int(config.warmup_fraction * total_steps))

    def lr_lambda(step: int) -> float:
        if step < warmup:
            return (step + 1) / warmup
        return max(0.0, (total_steps - step) / max(1, total_steps - warmup))

    scheduler = torch.optim.lr_scheduler.LambdaLR(optimizer, lr_lambda)

    log_lines: list[str] = []
    log_path = Path(job.log_path)
    log_path.parent.mkdir(parents=True, exist_ok=True)

    def log(event: str, **fields) -> None:
        line = " ".join([f"event={event}"] + [f"{k}={v}" for k, v in fields.items()])
        log_lines.append(line)
        with open(log_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")

    log(
        "config",
        base=job.base_checkpoint,
        margin=config.margin,
        distance=config.distance,
        pooling=config.pooling,
        batch_size=config.batch_size,
        epochs=config.epochs,
        validation_every=config.validation_every,
        learning_rate=config.learning_rate,
        warmup_fraction=config.warmup_fraction,
        seed=config.seed,
        train=len(train),
        validation=len(validation),
    )

    loss_before, acc_before = evaluate_triplets(model, tokenizer, validation, config)
    log("validation", step=0, loss=f"{loss_before:.6f}", accuracy=f"{acc_before:.4f}")

    batch_losses: list[float] = []
    step = 0
    start = time.monotonic()
    for epoch in range(config.epochs):
        model.train()
        for indices in loader:
            batch = [train[i] for i in indices.tolist()]
            a = _embed_batch(model, tokenizer, [t.anchor for t in batch], config.max_length)
            p = _embed_batch(model, tokenizer, [t.positive for t in batch], config.max_length)
            n = _embed_batch(model, tokenizer, [t.negative for t in batch], config.max_length)
            loss = triplet_loss(a, p, n, config.margin).mean()
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            scheduler.step()
            step += 1
            loss_value = float(loss.detach())
            batch_losses.append(loss_value)
            log("train", step=step, epoch=epoch, loss=f"{loss_value:.6f}")
            if step % config.validation_every == 0:
                val_loss, val_acc = evaluate_triplets(model, tokenizer, validation, config)
                log(
                    "validation",
                    step=step,
                    loss=f"{val_loss:.6f}",
                    accuracy=f"{val_acc:.4f}",
                )
                model.train()

    loss_after, acc_after = evaluate_triplets(model, tokenizer, validation, config)
    log("validation", step=step, loss=f"{loss_after:.6f}", accuracy=f"{acc_after:.4f}")
    log("done", steps=step, seconds=f"{time.monotonic() - start:.1f}")

    out_dir = Path(job.output_dir)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return TrainResult(
        checkpoint_dir=out_dir,
        accuracy_before=acc_before,
        accuracy_after=acc_after,
        batch_losses=batch_losses,
        log_lines=log_lines,
    )


def export_vectors_for(
    checkpoint: str,
    entries: list[tuple[str, str]],
    output_path,
    batch_size: int = 32,
    max_length: int = 128,
    source: str | None = None,
) -> int:
    """Encode (id, text) pairs and write a PATSIM-VECS file."""
    from .formats import write_vectors

    ids = [vector_id for vector_id, _ in entries]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise ValueError(f"duplicate vector id {dup!r}")
    tokenizer, model = load_encoder(checkpoint)
    vectors = encode_texts(
        tokenizer, model, [text for _, text in entries], batch_size, max_length
    )
    label = source or Path(str(checkpoint)).name.replace(" ", "_") or "encoder"
    write_vectors(zip(ids, vectors.numpy()), output_path, source=label)
    return len(ids)
