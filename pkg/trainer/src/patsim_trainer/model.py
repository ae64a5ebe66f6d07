"""Encoder loading, mean pooling, batched sentence encoding.

A checkpoint is anything transformers can resolve: a hub id (where
network access exists) or a local directory.  ``make_tiny_base`` builds
a small randomly initialized BERT encoder with a corpus-derived
WordPiece vocabulary so desk-scale jobs run fully offline.
"""

from __future__ import annotations

import re
from collections import Counter
from pathlib import Path

import torch
from tokenizers import Tokenizer, models, normalizers, pre_tokenizers
from tokenizers.processors import TemplateProcessing
from transformers import AutoModel, AutoTokenizer, BertConfig, BertModel, PreTrainedTokenizerFast

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def load_encoder(checkpoint: str):
    tokenizer = AutoTokenizer.from_pretrained(checkpoint)
    model = AutoModel.from_pretrained(checkpoint)
    return tokenizer, model


def mean_pool(last_hidden: torch.Tensor, attention_mask: torch.Tensor) -> torch.Tensor:
    """Mask-weighted mean over token positions."""
    mask = attention_mask.unsqueeze(-1).to(last_hidden.dtype)
    summed = (last_hidden * mask).sum(dim=1)
    counts = mask.sum(dim=1).clamp(min=1e-9)
    return summed / counts


def encode_texts(
    tokenizer,
    model,
    texts: list[str],
    batch_size: int = 32,
    max_length: int = 128,
) -> torch.Tensor:
    """Mean-pooled sentence vectors in inference mode."""
    model.eval()
    chunks = []
    with torch.no_grad():
        for lo in range(0, len(texts), batch_size):
            batch = texts[lo : lo + batch_size]
            enc = tokenizer(
                batch,
                padding=True,
                truncation=True,
                max_length=max_length,
                return_tensors="pt",
            )
            out = model(**enc)
            chunks.append(mean_pool(out.last_hidden_state, enc["attention_mask"]))
    return torch.cat(chunks, dim=0)


def build_wordpiece_tokenizer(vocab_tokens: list[str]) -> PreTrainedTokenizerFast:
    vocab = {tok: i for i, tok in enumerate(SPECIALS)}
    for token in vocab_tokens:
        if token not in vocab:
            vocab[token] = len(vocab)
    tok = Tokenizer(models.WordPiece(vocab, unk_token="[UNK]"))
    tok.normalizer = normalizers.BertNormalizer(lowercase=True)
    tok.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    tok.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )


def make_tiny_base(
    texts: list[str],
    out_dir,
    hidden_size: int = 64,
    num_layers: int = 2,
    num_heads: int = 2,
    vocab_limit: int = 5000,
    max_position: int = 256,
    seed: int = 0,
) -> Path:
    """Random-weights BERT encoder + corpus vocabulary, saved locally."""
    counts = Counter()
    for text in texts:
        counts.update(w.lower() for w in _WORD_RE.findall(text))
    vocab_tokens = [t for t, _ in counts.most_common(vocab_limit)]
    tokenizer = build_wordpiece_tokenizer(vocab_tokens)

    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(tokenizer),
        hidden_size=hidden_size,
        num_hidden_layers=num_layers,
        num_attention_heads=num_heads,
        intermediate_size=hidden_size * 4,
        max_position_embeddings=max_position,
    )
    model = BertModel(config)
    out_dir = Path(out_dir)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return out_dir
