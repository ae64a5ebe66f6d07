"""Transformer sentence-encoder fine-tuning on patent triplet files.

Consumes PATSIM-TRIPLETS (plus split manifests) produced by the
similarity pipeline, fine-tunes any transformers-resolvable encoder
with the euclidean margin triplet loss and mean pooling, and exports
sentence vectors as PATSIM-VECS files the pipeline scores directly.
"""

__version__ = "0.1.0"
