"""Eight-dimensional block encoding.

Every block is reduced to a fixed-order feature vector:

    [code_left, code_right, code_top, code_bottom,
     code_width, code_height, code_ft, code_fs]

Position codes normalize each bbox edge by the corresponding content
boundary of its page (the extreme edge over all blocks on that page),
so the leftmost block on a page always has code_left == 1.0 and the
rightmost always has code_right == 1.0. Size codes normalize width and
height by the largest block width/height in the document. code_ft is 1
when the block's dominant font is the document body font, else 0, and
code_fs is the ratio of the block's modal font size to the body size.

Image blocks carry no spans; they encode with code_ft = 0 and
code_fs = 1.0.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .blocks import BlockKind, Document, Page, TextBlock
from .errors import (
    DegenerateBoundaryError,
    EmptyDocumentError,
    NonFiniteFeatureError,
    SchemaError,
)
from .fonts import block_modal_font, block_modal_size, bucket_size, document_body_font
from .ingest import reading_sequence

FEATURE_NAMES = (
    "code_left",
    "code_right",
    "code_top",
    "code_bottom",
    "code_width",
    "code_height",
    "code_ft",
    "code_fs",
)

N_FEATURES = len(FEATURE_NAMES)

EPSILON = 1e-6


@dataclass(frozen=True, slots=True)
class FeatureVector:
    """One block's encoded geometry and typography."""

    code_left: float
    code_right: float
    code_top: float
    code_bottom: float
    code_width: float
    code_height: float
    code_ft: float
    code_fs: float

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.code_left,
            self.code_right,
            self.code_top,
            self.code_bottom,
            self.code_width,
            self.code_height,
            self.code_ft,
            self.code_fs,
        )


@dataclass(frozen=True, slots=True)
class PageBoundaries:
    """Extreme content edges of one page, plus its physical extent."""

    left: float
    right: float
    top: float
    bottom: float
    page_width: float
    page_height: float


@dataclass(frozen=True, slots=True)
class EncodingContext:
    """Document-level statistics every block encoding is relative to."""

    boundaries: dict[int, PageBoundaries]
    max_width: float
    max_height: float
    body_font: str
    body_font_size: float
    font_char_histogram: dict[str, int]
    size_char_histogram: dict[float, int]


def page_boundaries(page: Page) -> PageBoundaries:
    if not page.blocks:
        raise EmptyDocumentError(f"page {page.page_index} has no blocks")
    return PageBoundaries(
        left=min(b.bbox.x0 for b in page.blocks),
        right=max(b.bbox.x1 for b in page.blocks),
        top=min(b.bbox.y0 for b in page.blocks),
        bottom=max(b.bbox.y1 for b in page.blocks),
        page_width=page.width,
        page_height=page.height,
    )


def compute_context(doc: Document) -> EncodingContext:
    """Boundaries, size maxima, body font, and the char histograms."""
    if doc.block_count() == 0:
        raise EmptyDocumentError(f"document {doc.doc_id!r} has no blocks")
    body_font, body_size = document_body_font(doc)

    font_hist: Counter[str] = Counter()
    size_hist: Counter[float] = Counter()
    for block in doc.iter_blocks():
        for span in block.spans:
            font_hist[span.font_name] += span.char_count
            if span.font_name == body_font:
                size_hist[bucket_size(span.font_size)] += span.char_count

    return EncodingContext(
        boundaries={p.page_index: page_boundaries(p) for p in doc.pages if p.blocks},
        max_width=max(b.bbox.width for b in doc.iter_blocks()),
        max_height=max(b.bbox.height for b in doc.iter_blocks()),
        body_font=body_font,
        body_font_size=body_size,
        font_char_histogram=dict(font_hist),
        size_char_histogram=dict(size_hist),
    )


def _divisor(boundary: float, page_extent: float, page_index: int, axis: str) -> float:
    """Boundary value, or the page extent when the boundary is ~0.

    A zero boundary happens when a block touches the page edge; dividing
    by the page extent keeps the code finite and comparable.
    """
    if abs(boundary) > EPSILON:
        return boundary
    if abs(page_extent) > EPSILON:
        return page_extent
    raise DegenerateBoundaryError(
        f"page {page_index}: {axis} boundary and page extent are both ~0",
        page_index=page_index,
        axis=axis,
    )


def encode_block(block: TextBlock, ctx: EncodingContext) -> FeatureVector:
    try:
        pb = ctx.boundaries[block.page_index]
    except KeyError:
        raise EmptyDocumentError(
            f"block {block.block_id}: page {block.page_index} not in context"
        )
    if block.kind is BlockKind.IMAGE:
        code_ft, code_fs = 0.0, 1.0
    else:
        code_ft = 1.0 if block_modal_font(block) == ctx.body_font else 0.0
        code_fs = block_modal_size(block) / ctx.body_font_size
    fv = FeatureVector(
        code_left=block.bbox.x0 / _divisor(pb.left, pb.page_width, block.page_index, "left"),
        code_right=block.bbox.x1 / _divisor(pb.right, pb.page_width, block.page_index, "right"),
        code_top=block.bbox.y0 / _divisor(pb.top, pb.page_height, block.page_index, "top"),
        code_bottom=block.bbox.y1
        / _divisor(pb.bottom, pb.page_height, block.page_index, "bottom"),
        code_width=block.bbox.width / ctx.max_width,
        code_height=block.bbox.height / ctx.max_height,
        code_ft=code_ft,
        code_fs=code_fs,
    )
    for name, value in zip(FEATURE_NAMES, fv.as_tuple()):
        if not math.isfinite(value):
            raise NonFiniteFeatureError(
                f"block {block.block_id}: {name} is not finite",
                block_id=block.block_id,
                feature=name,
            )
    return fv


def encode_document(doc: Document) -> list[tuple[int, FeatureVector]]:
    """(block_id, FeatureVector) for every block, in reading order."""
    ctx = compute_context(doc)
    return [(b.block_id, encode_block(b, ctx)) for b in reading_sequence(doc)]


@dataclass(frozen=True, slots=True)
class FeatureRow:
    """One encoded block as a dataset row, optionally labeled."""

    block_id: int
    doc_id: str
    features: tuple[float, ...]
    label: str | None = None


def feature_rows(
    doc: Document, labels: dict[int, str] | None = None
) -> list[FeatureRow]:
    """Dataset rows for a document; ``labels`` maps block_id to label."""
    return [
        FeatureRow(
            block_id=block_id,
            doc_id=doc.doc_id,
            features=fv.as_tuple(),
            label=labels.get(block_id) if labels else None,
        )
        for block_id, fv in encode_document(doc)
    ]


def rows_to_matrix(rows: Iterable[FeatureRow]) -> np.ndarray:
    """Stack feature rows into an (n, 8) float64 matrix."""
    mat = np.asarray([r.features for r in rows], dtype=np.float64)
    if mat.size == 0:
        return mat.reshape(0, N_FEATURES)
    return mat


# ---------------------------------------------------------------------------
# JSONL persistence
# ---------------------------------------------------------------------------


def write_features_jsonl(rows: Iterable[FeatureRow]) -> str:
    lines = [
        json.dumps(
            {
                "block_id": r.block_id,
                "features": [float(v) for v in r.features],
                "label": r.label,
                "doc_id": r.doc_id,
            },
            ensure_ascii=False,
        )
        for r in rows
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def read_features_jsonl(text: str) -> list[FeatureRow]:
    rows: list[FeatureRow] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"features line {lineno} is not valid JSON: {exc}")
        if not isinstance(data, dict):
            raise SchemaError(f"features line {lineno} must be an object")
        try:
            block_id = data["block_id"]
            features = data["features"]
        except KeyError as exc:
            raise SchemaError(f"features line {lineno} missing field {exc}")
        label = data.get("label")
        doc_id = data.get("doc_id", "")
        if (
            not isinstance(features, list)
            or len(features) != N_FEATURES
            or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool)
                for v in features
            )
        ):
            raise SchemaError(
                f"features line {lineno}: features must be a list of {N_FEATURES} numbers"
            )
        if label is not None and not isinstance(label, str):
            raise SchemaError(f"features line {lineno}: label must be a string or null")
        if not isinstance(block_id, int) or isinstance(block_id, bool):
            raise SchemaError(f"features line {lineno}: block_id must be an integer")
        rows.append(
            FeatureRow(block_id, str(doc_id), tuple(float(v) for v in features), label)
        )
    return rows
