"""Text normalization and tokenization shared by every static model."""

from __future__ import annotations

import re
import unicodedata

# Runs of alphanumeric characters; underscore is a separator like any
# other punctuation.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_WS_RE = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Ingest-time normalization: NFC, collapse whitespace, strip ends.

    No case folding happens here; tokenizers decide.
    """
    text = unicodedata.normalize("NFC", text)
    return _WS_RE.sub(" ", text).strip()


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, keep tokens of length >= 2.

    Single characters (including lone digits, frequent in formula-heavy
    abstracts) are dropped as noise.  Digit-only tokens of length >= 2
    are kept.
    """
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2]
