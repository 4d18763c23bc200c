"""Domain types shared by every stage of the pipeline.

Coordinate convention: page points, origin at the top-left corner,
y grows downward. All types are immutable after ingest, so documents
can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator


class BlockKind(Enum):
    TEXT = "text"
    IMAGE = "image"


class BlockLabel(Enum):
    """Classification target. Declaration order is the canonical class order."""

    BODY_TEXT = "BodyText"
    SUPPLEMENT = "Supplement"
    ACCESSORY = "Accessory"


#: Canonical ordering used for deterministic tie-breaking.
LABEL_ORDER: tuple[BlockLabel, ...] = tuple(BlockLabel)


class ZoneKind(Enum):
    FIGURE = "Figure"
    TABLE = "Table"


@dataclass(frozen=True, slots=True)
class BoundingBox:
    """Axis-aligned box; invariants x0 <= x1 and y0 <= y1 are enforced at ingest."""

    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center_y(self) -> float:
        return 0.5 * (self.y0 + self.y1)

    def union(self, other: "BoundingBox") -> "BoundingBox":
        return BoundingBox(
            min(self.x0, other.x0),
            min(self.y0, other.y0),
            max(self.x1, other.x1),
            max(self.y1, other.y1),
        )

    def horizontal_overlap(self, other: "BoundingBox") -> float:
        """Length of the shared x-interval, 0 when disjoint."""
        return max(0.0, min(self.x1, other.x1) - max(self.x0, other.x0))

    def contains(self, other: "BoundingBox", tol: float = 1e-9) -> bool:
        return (
            self.x0 <= other.x0 + tol
            and self.y0 <= other.y0 + tol
            and self.x1 >= other.x1 - tol
            and self.y1 >= other.y1 - tol
        )

    def as_list(self) -> list[float]:
        return [self.x0, self.y0, self.x1, self.y1]


def union_all(boxes: list[BoundingBox]) -> BoundingBox:
    if not boxes:
        raise ValueError("union_all needs at least one box")
    out = boxes[0]
    for b in boxes[1:]:
        out = out.union(b)
    return out


@dataclass(frozen=True, slots=True)
class SpanFontStats:
    """Per-span font aggregation input: name, size in points, character count."""

    font_name: str
    font_size: float
    char_count: int


@dataclass(frozen=True, slots=True)
class TextBlock:
    """One layout block. Image blocks carry empty text and no spans."""

    block_id: int
    page_index: int
    bbox: BoundingBox
    kind: BlockKind
    text: str
    spans: tuple[SpanFontStats, ...]
    reading_order: int | None = None

    @property
    def is_text(self) -> bool:
        return self.kind is BlockKind.TEXT


@dataclass(frozen=True, slots=True)
class Page:
    page_index: int
    width: float
    height: float
    blocks: tuple[TextBlock, ...]


@dataclass(frozen=True, slots=True)
class Document:
    doc_id: str
    pages: tuple[Page, ...]

    def iter_blocks(self) -> Iterator[TextBlock]:
        for page in self.pages:
            yield from page.blocks

    def block_count(self) -> int:
        return sum(len(p.blocks) for p in self.pages)

    def block_by_id(self, block_id: int) -> TextBlock:
        for block in self.iter_blocks():
            if block.block_id == block_id:
                return block
        raise KeyError(block_id)

    def page_of_block(self, block_id: int) -> Page:
        for page in self.pages:
            for block in page.blocks:
                if block.block_id == block_id:
                    return page
        raise KeyError(block_id)


@dataclass(frozen=True, slots=True)
class ZoneDetection:
    """A detected figure/table region.

    ``zone`` contains the union of the member block boxes (possibly widened
    to the caption width); the caption block is never a member. An empty
    ``member_block_ids`` marks a flagged detection whose zone fell back to
    the caption box alone.
    """

    kind: ZoneKind
    number: int
    caption_block_id: int
    zone: BoundingBox
    member_block_ids: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "number": self.number,
            "bbox": self.zone.as_list(),
            "caption_block_id": self.caption_block_id,
            "member_block_ids": list(self.member_block_ids),
        }


def zone_from_json_dict(obj: dict) -> ZoneDetection:
    return ZoneDetection(
        kind=ZoneKind(obj["kind"]),
        number=int(obj["number"]),
        caption_block_id=int(obj["caption_block_id"]),
        zone=BoundingBox(*(float(v) for v in obj["bbox"])),
        member_block_ids=tuple(int(i) for i in obj["member_block_ids"]),
    )


def with_reading_order(block: TextBlock, order: int) -> TextBlock:
    return replace(block, reading_order=order)
