"""Char-weighted font statistics over spans, blocks, and documents.

Sizes are bucketed to 0.1 pt before any counting so that extractor
jitter (9.999 vs 10.0) does not split a histogram bin. All modal
choices break ties deterministically: lexicographically smaller font
name, numerically smaller size.
"""

from __future__ import annotations

import logging
import math
from collections import Counter

from .blocks import Document, TextBlock
from .errors import EmptyDocumentError

logger = logging.getLogger(__name__)


def bucket_size(size: float) -> float:
    """Round a font size half-up to one decimal place."""
    return math.floor(size * 10.0 + 0.5) / 10.0


def block_modal_font(block: TextBlock) -> str:
    """Font name carrying the most characters in this block."""
    counts: Counter[str] = Counter()
    for span in block.spans:
        counts[span.font_name] += span.char_count
    if not counts:
        raise EmptyDocumentError(f"block {block.block_id} has no spans")
    best = max(counts.items(), key=lambda kv: (kv[1], _neg_name(kv[0])))
    return best[0]


def block_modal_size(block: TextBlock) -> float:
    """Bucketed font size carrying the most characters in this block."""
    counts: Counter[float] = Counter()
    for span in block.spans:
        counts[bucket_size(span.font_size)] += span.char_count
    if not counts:
        raise EmptyDocumentError(f"block {block.block_id} has no spans")
    return max(counts.items(), key=lambda kv: (kv[1], -kv[0]))[0]


def document_body_font(doc: Document) -> tuple[str, float]:
    """Identify the document's body font and its modal size.

    The body font is the font name with the largest total character
    count across all text blocks. Its size is the char-weighted modal
    bucketed size among spans set in that font.
    """
    font_counts: Counter[str] = Counter()
    for block in doc.iter_blocks():
        for span in block.spans:
            font_counts[span.font_name] += span.char_count
    if not font_counts:
        raise EmptyDocumentError(f"document {doc.doc_id!r} has no text spans")

    top = max(font_counts.values())
    tied = sorted(name for name, n in font_counts.items() if n == top)
    if len(tied) > 1:
        logger.warning(
            "body font tie between %s; choosing %r", tied, tied[0]
        )
    body_font = tied[0]

    size_counts: Counter[float] = Counter()
    for block in doc.iter_blocks():
        for span in block.spans:
            if span.font_name == body_font:
                size_counts[bucket_size(span.font_size)] += span.char_count
    return body_font, max(size_counts.items(), key=lambda kv: (kv[1], -kv[0]))[0]


def _neg_name(name: str) -> tuple[int, ...]:
    # max() with this key prefers lexicographically smaller names on count ties
    return tuple(-ord(c) for c in name)
