"""Parse, validate, and normalize block dumps; assign reading order.

The block-dump JSON schema is the contract between any extractor front
end and this pipeline:

    {"doc_id": str, "pages": [{"page_index": int, "width": float,
      "height": float, "blocks": [{"block_id": int, "kind": "text"|"image",
      "bbox": [x0, y0, x1, y1], "text": str,
      "spans": [{"font": str, "size": float, "chars": int}]}]}]}

Normalized dumps additionally carry a ``reading_order`` int per block.
Text blocks with empty text or no usable spans are dropped with a
warning because they would poison the font histograms downstream.
"""

from __future__ import annotations

import json
import logging
import math
from typing import Any

from .blocks import (
    BlockKind,
    BoundingBox,
    Document,
    Page,
    SpanFontStats,
    TextBlock,
)
from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import GeometryError, SchemaError

logger = logging.getLogger(__name__)

# Extractors occasionally emit slightly negative coordinates; clamp small
# jitter to zero, reject anything worse.
NEGATIVE_COORD_SLACK = 5.0


def parse_block_dump(raw: bytes | str) -> Document:
    """Parse and validate a block dump; returns an immutable Document."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"dump is not UTF-8: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"dump is not valid JSON: {exc}") from exc
    return document_from_json_dict(data)


def document_from_json_dict(data: Any) -> Document:
    if not isinstance(data, dict):
        raise SchemaError("dump root must be an object", path="$")
    doc_id = _require(data, "doc_id", str, "$")
    pages_raw = _require(data, "pages", list, "$")
    pages: list[Page] = []
    seen_pages: set[int] = set()
    seen_blocks: set[int] = set()
    for p_idx, page_raw in enumerate(pages_raw):
        path = f"pages[{p_idx}]"
        if not isinstance(page_raw, dict):
            raise SchemaError("page must be an object", path=path)
        page_index = _require(page_raw, "page_index", int, path)
        if page_index in seen_pages:
            raise SchemaError(f"duplicate page_index {page_index}", path=path)
        seen_pages.add(page_index)
        width = _number(page_raw, "width", path)
        height = _number(page_raw, "height", path)
        if width <= 0 or height <= 0:
            raise SchemaError("page width/height must be positive", path=path)
        blocks_raw = _require(page_raw, "blocks", list, path)
        blocks: list[TextBlock] = []
        for b_idx, block_raw in enumerate(blocks_raw):
            block = _parse_block(block_raw, page_index, f"{path}.blocks[{b_idx}]")
            if block is None:
                continue
            if block.block_id in seen_blocks:
                raise SchemaError(
                    f"duplicate block_id {block.block_id}",
                    path=f"{path}.blocks[{b_idx}]",
                )
            seen_blocks.add(block.block_id)
            blocks.append(block)
        pages.append(
            Page(page_index=page_index, width=width, height=height, blocks=tuple(blocks))
        )
    return Document(doc_id=doc_id, pages=tuple(pages))


def _parse_block(raw: Any, page_index: int, path: str) -> TextBlock | None:
    if not isinstance(raw, dict):
        raise SchemaError("block must be an object", path=path)
    block_id = _require(raw, "block_id", int, path)
    kind_str = _require(raw, "kind", str, path)
    try:
        kind = BlockKind(kind_str)
    except ValueError:
        raise SchemaError(f"kind must be 'text' or 'image', got {kind_str!r}", path=path)
    bbox = _parse_bbox(raw.get("bbox"), block_id, path)
    text = _require(raw, "text", str, path)
    spans_raw = _require(raw, "spans", list, path)
    order = raw.get("reading_order")
    if order is not None and not isinstance(order, int):
        raise SchemaError("reading_order must be an integer", path=path)

    if kind is BlockKind.IMAGE:
        if text or spans_raw:
            raise SchemaError("image blocks must have empty text and spans", path=path)
        return TextBlock(block_id, page_index, bbox, kind, "", (), order)

    spans: list[SpanFontStats] = []
    for s_idx, span_raw in enumerate(spans_raw):
        span_path = f"{path}.spans[{s_idx}]"
        if not isinstance(span_raw, dict):
            raise SchemaError("span must be an object", path=span_path)
        font = _require(span_raw, "font", str, span_path)
        size = _number(span_raw, "size", span_path)
        chars = _require(span_raw, "chars", int, span_path)
        if size <= 0:
            raise SchemaError("span size must be positive", path=span_path)
        if chars < 0:
            raise SchemaError("span chars must be non-negative", path=span_path)
        if chars == 0:
            continue
        spans.append(SpanFontStats(font, size, chars))
    if not text.strip() or not spans:
        logger.warning(
            "dropping block %d on page %d: empty text or no usable spans",
            block_id,
            page_index,
        )
        return None
    return TextBlock(block_id, page_index, bbox, kind, text, tuple(spans), order)


def _parse_bbox(raw: Any, block_id: int, path: str) -> BoundingBox:
    if (
        not isinstance(raw, list)
        or len(raw) != 4
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
    ):
        raise SchemaError("bbox must be [x0, y0, x1, y1] numbers", path=f"{path}.bbox")
    coords = [float(v) for v in raw]
    if not all(math.isfinite(v) for v in coords):
        raise GeometryError(f"block {block_id}: bbox has non-finite coordinates", block_id=block_id)
    clamped = []
    for v in coords:
        if v < 0:
            if v < -NEGATIVE_COORD_SLACK:
                raise GeometryError(
                    f"block {block_id}: negative coordinate {v}", block_id=block_id
                )
            v = 0.0
        clamped.append(v)
    x0, y0, x1, y1 = clamped
    if x0 > x1 or y0 > y1:
        raise GeometryError(
            f"block {block_id}: inverted bbox [{x0}, {y0}, {x1}, {y1}]",
            block_id=block_id,
        )
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        raise GeometryError(f"block {block_id}: zero-area bbox", block_id=block_id)
    return BoundingBox(x0, y0, x1, y1)


def _require(obj: dict, key: str, typ: type, path: str):
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", path=f"{path}.{key}")
    value = obj[key]
    if typ is int and isinstance(value, bool):
        raise SchemaError(f"{key} must be an integer", path=f"{path}.{key}")
    if not isinstance(value, typ):
        raise SchemaError(
            f"{key} must be {typ.__name__}, got {type(value).__name__}",
            path=f"{path}.{key}",
        )
    return value


def _number(obj: dict, key: str, path: str) -> float:
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", path=f"{path}.{key}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{key} must be a number", path=f"{path}.{key}")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{key} must be finite", path=f"{path}.{key}")
    return value


# ---------------------------------------------------------------------------
# Reading order
# ---------------------------------------------------------------------------


def is_single_column(page: Page, config: PipelineConfig = DEFAULT_CONFIG) -> bool:
    """A page is single-column when most text blocks span most of its width."""
    text_blocks = [b for b in page.blocks if b.is_text]
    if not text_blocks:
        return True
    wide = sum(
        1 for b in text_blocks if b.bbox.width > config.wide_block_ratio * page.width
    )
    return wide / len(text_blocks) > config.single_column_fraction


def column_of(block: TextBlock, page: Page, config: PipelineConfig = DEFAULT_CONFIG) -> int:
    """0 for the left column, 1 for the right; 0 on single-column pages."""
    if is_single_column(page, config):
        return 0
    center = 0.5 * (block.bbox.x0 + block.bbox.x1)
    return 0 if center < page.width / 2 else 1


def assign_reading_order(doc: Document, config: PipelineConfig = DEFAULT_CONFIG) -> Document:
    """Sort each page column-major and stamp dense reading_order values.

    Idempotent: page block tuples end up stored in reading order, so a
    second pass reproduces the same document.
    """
    pages: list[Page] = []
    for page in doc.pages:
        ordered = sorted(
            page.blocks,
            key=lambda b: (column_of(b, page, config), b.bbox.y0, b.bbox.x0, b.block_id),
        )
        stamped = tuple(
            TextBlock(
                b.block_id, b.page_index, b.bbox, b.kind, b.text, b.spans, order
            )
            for order, b in enumerate(ordered)
        )
        pages.append(Page(page.page_index, page.width, page.height, stamped))
    return Document(doc.doc_id, tuple(pages))


def reading_sequence(doc: Document) -> list[TextBlock]:
    """All blocks in global reading order (page order, then within-page order)."""
    out: list[TextBlock] = []
    for page in sorted(doc.pages, key=lambda p: p.page_index):
        blocks = sorted(
            page.blocks,
            key=lambda b: b.reading_order if b.reading_order is not None else b.block_id,
        )
        out.extend(blocks)
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def document_to_json_dict(doc: Document) -> dict:
    pages = []
    for page in doc.pages:
        blocks = []
        for b in page.blocks:
            entry: dict[str, Any] = {
                "block_id": b.block_id,
                "kind": b.kind.value,
                "bbox": [float(v) for v in b.bbox.as_list()],
                "text": b.text,
                "spans": [
                    {"font": sp.font_name, "size": float(sp.font_size), "chars": sp.char_count}
                    for sp in b.spans
                ],
            }
            if b.reading_order is not None:
                entry["reading_order"] = b.reading_order
            blocks.append(entry)
        pages.append(
            {
                "page_index": page.page_index,
                "width": float(page.width),
                "height": float(page.height),
                "blocks": blocks,
            }
        )
    return {"doc_id": doc.doc_id, "pages": pages}


def serialize_document(doc: Document) -> str:
    return json.dumps(document_to_json_dict(doc), ensure_ascii=False, indent=2) + "\n"
