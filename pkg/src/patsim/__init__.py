"""Text-based patent similarity pipeline.

Builds the CPC/filing-year triplet dataset and the interference
ground-truth benchmark from Patents View-style dumps, trains the static
document embedders (word2vec + TF-IDF pooling, PV-DBOW), loads external
sentence-encoder vectors, and scores every model with the max/min
cosine win-rate protocol.
"""

__version__ = "0.1.0"
