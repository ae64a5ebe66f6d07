"""Shared fine-tuning contract.

The transformer trainer lives in a separate package and talks to this
pipeline only through files, but the training protocol itself is part
of the contract: euclidean margin-5 triplet loss over mean-pooled
sentence vectors, batch size 8, one epoch, a validation pass every
1,000 steps, on the 10% sample split 70/30.  This type records those
defaults on the producing side so roster labels, logs, and the trainer
agree on what "the protocol" means.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParameterError


@dataclass(frozen=True)
class TripletLossConfig:
    margin: float = 5.0
    distance: str = "euclidean"
    pooling: str = "mean"
    batch_size: int = 8
    epochs: int = 1
    validation_every: int = 1000
    sample_fraction: float = 0.10
    train_fraction: float = 0.70

    def validate(self) -> None:
        if self.margin <= 0:
            raise ParameterError("triplet margin must be > 0")
        if self.distance != "euclidean":
            raise ParameterError(f"unsupported distance {self.distance!r}")
        if self.pooling != "mean":
            raise ParameterError(f"unsupported pooling {self.pooling!r}")
