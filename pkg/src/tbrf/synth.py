"""Synthetic two-column article generator with ground truth.

Emits documents that look statistically like scholarly PDF dumps: a
titled front page, two text columns, numbered section headings, inline
equations, figures with image and label blocks, tables as stacks of row
blocks, a references section, and a short appendix. Every block carries
a gold label and every figure/table a gold zone box, so generated
corpora can score the full pipeline without any hand annotation.

Layout follows fixed US-letter geometry. Class proportions hover near
one third body text, somewhat under two thirds supplement, and a small
accessory remainder, mirroring the skew of real annotated corpora.

Some documents include a "continuous table" page: two tables stacked in
one column, the first captioned above and the second captioned below,
with nothing but a small gap between their rows. Those pages are the
hard case for zone assignment, since both captions see one merged run
of rows.

Generation is pure: the same (doc_index, seed) pair always yields the
same document, byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .blocks import (
    BlockKind,
    BlockLabel,
    BoundingBox,
    Document,
    Page,
    SpanFontStats,
    TextBlock,
    ZoneKind,
)
from .encoder import FeatureRow, feature_rows
from .evaluation import GoldZone
from .ingest import assign_reading_order

PAGE_WIDTH = 612.0
PAGE_HEIGHT = 792.0
COLUMNS = ((72.0, 297.0), (315.0, 540.0))
FLOW_TOP = 72.0
FLOW_BOTTOM = 714.0
FULL_RIGHT = 534.0  # full-width blocks stay left of the page midline

BODY_FONT = "SerifBody"
TITLE_FONT = "SerifTitle"
AUTHOR_FONT = "SerifSmallCaps"
HEADING_FONT = "SansBold"
FIGLABEL_FONT = "SansLabel"
MATH_FONT = "MathItalic"
CAPTION_FONT = "SerifItalic"
TABLE_FONT = "TableGrid"

_LINE = {
    7.0: 9.0, 8.0: 10.0, 9.0: 11.0, 10.0: 12.0,
    12.0: 14.0, 14.0: 16.0, 16.0: 19.0,
}

_WORDS = (
    "margin", "block", "layout", "kernel", "feature", "page", "column",
    "spacing", "vector", "corpus", "signal", "metric", "region", "frame",
    "glyph", "stream", "weight", "order", "bound", "trace", "grid",
    "panel", "stride", "label", "ratio", "span",
)

_HEAD_WORDS = (
    "Overview", "Method", "Encoding", "Results", "Discussion", "Analysis",
    "Setup", "Background", "Evaluation", "Details",
)


def _sentence(rng: random.Random, n_words: int) -> str:
    words = [rng.choice(_WORDS) for _ in range(n_words)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def _text(rng: random.Random, n_words: int) -> str:
    out = []
    left = n_words
    while left > 0:
        take = min(left, rng.randint(5, 9))
        out.append(_sentence(rng, take))
        left -= take
    return " ".join(out)


@dataclass(slots=True)
class SynthDocument:
    """A generated document with its gold labels and zones."""

    document: Document
    labels: dict[int, str]
    zones: list[GoldZone]


class _Builder:
    def __init__(self, doc_id: str, rng: random.Random) -> None:
        self.doc_id = doc_id
        self.rng = rng
        self.page_blocks: list[list[TextBlock]] = []
        self.labels: dict[int, str] = {}
        self.zones: list[GoldZone] = []
        self.next_id = 0
        self.fig_no = 0
        self.tab_no = 0

    def new_page(self) -> int:
        idx = len(self.page_blocks)
        self.page_blocks.append([])
        x0 = PAGE_WIDTH / 2.0 - 5.0
        self.add_text(
            idx,
            BoundingBox(x0, 758.0, x0 + 10.0, 769.0),
            str(idx + 1),
            BODY_FONT,
            10.0,
            BlockLabel.ACCESSORY,
        )
        if idx > 0:
            width = self.rng.uniform(130.0, 180.0)
            left = PAGE_WIDTH / 2.0 - width / 2.0
            self.add_text(
                idx,
                BoundingBox(left, 40.0, left + width, 50.0),
                _sentence(self.rng, 3).rstrip("."),
                AUTHOR_FONT,
                8.0,
                BlockLabel.ACCESSORY,
            )
        return idx

    def add_text(
        self,
        page_idx: int,
        bbox: BoundingBox,
        text: str,
        font: str,
        size: float,
        label: BlockLabel,
        minor_span: tuple[str, float] | None = None,
    ) -> TextBlock:
        spans = [SpanFontStats(font, size, max(len(text), 1))]
        if minor_span is not None:
            spans.append(SpanFontStats(minor_span[0], minor_span[1], len(text) // 8 + 1))
        block = TextBlock(
            block_id=self.next_id,
            page_index=page_idx,
            bbox=bbox,
            kind=BlockKind.TEXT,
            text=text,
            spans=tuple(spans),
        )
        self.next_id += 1
        self.page_blocks[page_idx].append(block)
        self.labels[block.block_id] = label.value
        return block

    def add_image(self, page_idx: int, bbox: BoundingBox) -> TextBlock:
        block = TextBlock(
            block_id=self.next_id,
            page_index=page_idx,
            bbox=bbox,
            kind=BlockKind.IMAGE,
            text="",
            spans=(),
        )
        self.next_id += 1
        self.page_blocks[page_idx].append(block)
        self.labels[block.block_id] = BlockLabel.SUPPLEMENT.value
        return block

    def finish(self) -> SynthDocument:
        pages = tuple(
            Page(i, PAGE_WIDTH, PAGE_HEIGHT, tuple(blocks))
            for i, blocks in enumerate(self.page_blocks)
        )
        doc = assign_reading_order(Document(self.doc_id, pages))
        return SynthDocument(doc, self.labels, self.zones)


class _Flow:
    """Cursor moving down columns, then across, then to the next page."""

    def __init__(self, builder: _Builder, first_page_top: float) -> None:
        self.b = builder
        self.first_page_top = first_page_top
        self.page = 0
        self.col = 0
        self.y = first_page_top

    def _top(self, page: int) -> float:
        return self.first_page_top if page == 0 else FLOW_TOP

    def _bottom(self, page: int, col: int) -> float:
        # page 0 column 0 reserves space for the footnote
        return 686.0 if (page == 0 and col == 0) else FLOW_BOTTOM

    def ensure(self, height: float) -> None:
        while self.y + height > self._bottom(self.page, self.col):
            if self.col == 0:
                self.col = 1
            else:
                self.b.new_page()
                self.page += 1
                self.col = 0
            self.y = self._top(self.page)

    @property
    def col_bounds(self) -> tuple[float, float]:
        return COLUMNS[self.col]


def _width_rule(frame: BoundingBox, caption: BoundingBox) -> BoundingBox:
    # ground truth mirrors the publishing convention the detector also
    # follows: a zone is never narrower than its caption line
    if frame.width > caption.width:
        return frame
    return BoundingBox(caption.x0, frame.y0, caption.x1, frame.y1)


def _emit_paragraph(b: _Builder, f: _Flow, label: BlockLabel = BlockLabel.BODY_TEXT) -> None:
    rng = b.rng
    lines = rng.randint(3, 8)
    height = lines * _LINE[10.0]
    f.ensure(height)
    x0, x1 = f.col_bounds
    minor = (MATH_FONT, 10.0) if rng.random() < 0.15 else None
    b.add_text(
        f.page,
        BoundingBox(x0, f.y, x1, f.y + height),
        _text(rng, lines * 7),
        BODY_FONT,
        10.0,
        label,
        minor_span=minor,
    )
    f.y += height + rng.uniform(10.0, 14.0)


def _emit_heading(b: _Builder, f: _Flow, number: str) -> None:
    rng = b.rng
    height = _LINE[12.0]
    f.ensure(height + 40.0)  # keep a heading attached to some following text
    x0 = f.col_bounds[0]
    width = rng.uniform(130.0, 210.0)
    b.add_text(
        f.page,
        BoundingBox(x0, f.y, x0 + width, f.y + height),
        f"{number} {rng.choice(_HEAD_WORDS)}",
        HEADING_FONT,
        12.0,
        BlockLabel.SUPPLEMENT,
    )
    f.y += height + 8.0


def _emit_equation(b: _Builder, f: _Flow) -> None:
    rng = b.rng
    height = rng.uniform(14.0, 20.0)
    f.ensure(height)
    x0, x1 = f.col_bounds
    width = rng.uniform(120.0, 200.0)
    left = x0 + (x1 - x0 - width) / 2.0
    b.add_text(
        f.page,
        BoundingBox(left, f.y, left + width, f.y + height),
        _sentence(rng, rng.randint(4, 7)).rstrip("."),
        MATH_FONT,
        10.0,
        BlockLabel.SUPPLEMENT,
    )
    f.y += height + rng.uniform(10.0, 14.0)


def _emit_figure(b: _Builder, f: _Flow) -> None:
    rng = b.rng
    b.fig_no += 1
    number = b.fig_no
    with_image = rng.random() < 0.6
    image_h = rng.uniform(70.0, 110.0) if with_image else 0.0
    n_labels = rng.randint(3, 4)
    label_h = 10.0
    cap_lines = rng.randint(1, 2)
    cap_h = cap_lines * _LINE[9.0]
    content_h = (image_h + 4.0 if with_image else 0.0) + n_labels * (label_h + 4.0) - 4.0
    total = content_h + 6.0 + cap_h
    f.ensure(total)
    x0, x1 = f.col_bounds

    content: list[BoundingBox] = []
    y = f.y
    if with_image:
        box = BoundingBox(x0, y, x1, y + image_h)
        b.add_image(f.page, box)
        content.append(box)
        y += image_h + 4.0
    for _ in range(n_labels):
        width = rng.uniform(140.0, 215.0)
        left = x0 + rng.uniform(0.0, (x1 - x0) - width)
        box = BoundingBox(left, y, left + width, y + label_h)
        b.add_text(
            f.page, box, _sentence(rng, 3).rstrip("."), FIGLABEL_FONT, 8.0,
            BlockLabel.SUPPLEMENT,
        )
        content.append(box)
        y += label_h + 4.0
    y = y - 4.0 + 6.0
    cap_box = BoundingBox(x0, y, x1, y + cap_h)
    b.add_text(
        f.page,
        cap_box,
        f"Figure {number}: {_text(rng, rng.randint(5, 10))}",
        CAPTION_FONT,
        9.0,
        BlockLabel.SUPPLEMENT,
    )
    frame = content[0]
    for box in content[1:]:
        frame = frame.union(box)
    b.zones.append(
        GoldZone(b.doc_id, ZoneKind.FIGURE, number, _width_rule(frame, cap_box))
    )
    f.y = y + cap_h + rng.uniform(12.0, 16.0)


def _table_rows(
    b: _Builder, f: _Flow, n_rows: int, width: float, y: float
) -> list[BoundingBox]:
    rng = b.rng
    x0, x1 = f.col_bounds
    left = x0 + ((x1 - x0) - width) / 2.0
    rows = []
    for _ in range(n_rows):
        box = BoundingBox(left, y, left + width, y + 11.0)
        b.add_text(
            f.page, box, _sentence(rng, rng.randint(3, 5)).rstrip("."),
            TABLE_FONT, 9.0, BlockLabel.SUPPLEMENT,
        )
        rows.append(box)
        y += 11.0 + 4.0
    return rows


def _emit_table(b: _Builder, f: _Flow) -> None:
    rng = b.rng
    b.tab_no += 1
    number = b.tab_no
    n_rows = rng.randint(10, 13)
    row_w_delta = rng.choice((0.0, 0.0, 10.0, 20.0))
    cap_h = _LINE[9.0]
    total = cap_h + 6.0 + n_rows * 15.0 - 4.0
    f.ensure(total)
    x0, x1 = f.col_bounds

    cap_box = BoundingBox(x0, f.y, x1, f.y + cap_h)
    b.add_text(
        f.page,
        cap_box,
        f"Table {number}: {_text(rng, rng.randint(4, 8))}",
        CAPTION_FONT,
        9.0,
        BlockLabel.SUPPLEMENT,
    )
    rows = _table_rows(b, f, n_rows, (x1 - x0) - row_w_delta, f.y + cap_h + 6.0)
    frame = rows[0]
    for box in rows[1:]:
        frame = frame.union(box)
    b.zones.append(
        GoldZone(b.doc_id, ZoneKind.TABLE, number, _width_rule(frame, cap_box))
    )
    f.y = rows[-1].y1 + rng.uniform(12.0, 16.0)


def _emit_continuous_tables(b: _Builder, f: _Flow) -> None:
    """Two stacked tables: caption above the first, below the second.

    Between the two row stacks sits only a small gap, so a detector sees
    one merged run of supplement rows claimed by both captions. Row
    counts are kept equal so the geometric midpoint falls in the gap.
    """
    rng = b.rng
    n_rows = rng.randint(4, 6)
    cap_h = _LINE[9.0]
    rows_h = n_rows * 15.0 - 4.0
    total = cap_h + 6.0 + rows_h + 8.0 + rows_h + 6.0 + cap_h
    f.ensure(total)
    x0, x1 = f.col_bounds
    width = x1 - x0

    b.tab_no += 1
    number_a = b.tab_no
    cap_a = BoundingBox(x0, f.y, x1, f.y + cap_h)
    b.add_text(
        f.page, cap_a, f"Table {number_a}: {_text(rng, rng.randint(4, 7))}",
        CAPTION_FONT, 9.0, BlockLabel.SUPPLEMENT,
    )
    rows_a = _table_rows(b, f, n_rows, width, f.y + cap_h + 6.0)

    rows_b_top = rows_a[-1].y1 + 8.0
    rows_b = _table_rows(b, f, n_rows, width, rows_b_top)
    b.tab_no += 1
    number_b = b.tab_no
    cap_b_top = rows_b[-1].y1 + 6.0
    cap_b = BoundingBox(x0, cap_b_top, x1, cap_b_top + cap_h)
    b.add_text(
        f.page, cap_b, f"Table {number_b}: {_text(rng, rng.randint(4, 7))}",
        CAPTION_FONT, 9.0, BlockLabel.SUPPLEMENT,
    )

    for number, rows, cap in ((number_a, rows_a, cap_a), (number_b, rows_b, cap_b)):
        frame = rows[0]
        for box in rows[1:]:
            frame = frame.union(box)
        b.zones.append(
            GoldZone(b.doc_id, ZoneKind.TABLE, number, _width_rule(frame, cap))
        )
    f.y = cap_b.y1 + rng.uniform(12.0, 16.0)


def _emit_reference(b: _Builder, f: _Flow, index: int) -> None:
    rng = b.rng
    lines = rng.randint(2, 3)
    height = lines * _LINE[10.0]
    f.ensure(height)
    x0, x1 = f.col_bounds
    b.add_text(
        f.page,
        BoundingBox(x0, f.y, x1, f.y + height),
        f"[{index}] {_text(rng, lines * 6)}",
        BODY_FONT,
        10.0,
        BlockLabel.BODY_TEXT,
    )
    f.y += height + rng.uniform(6.0, 10.0)


def generate_document(
    doc_index: int = 0,
    seed: int = 0,
    continuous_tables: bool | None = None,
) -> SynthDocument:
    """One synthetic article; continuous tables on every fourth index."""
    rng = random.Random(seed * 100003 + doc_index * 7919 + 17)
    if continuous_tables is None:
        continuous_tables = doc_index % 4 == 1
    b = _Builder(f"synth-{seed:04d}-{doc_index:03d}", rng)
    b.new_page()

    # front matter: title, authors, abstract, footnote
    title_h = _LINE[16.0]
    b.add_text(
        0,
        BoundingBox(72.0, 72.0, FULL_RIGHT, 72.0 + title_h),
        _sentence(rng, rng.randint(6, 9)).rstrip("."),
        TITLE_FONT,
        16.0,
        BlockLabel.ACCESSORY,
    )
    authors_w = rng.uniform(220.0, 280.0)
    b.add_text(
        0,
        BoundingBox(72.0, 98.0, 72.0 + authors_w, 98.0 + _LINE[14.0]),
        _sentence(rng, rng.randint(4, 6)).rstrip("."),
        AUTHOR_FONT,
        14.0,
        BlockLabel.ACCESSORY,
    )
    abstract_lines = rng.randint(4, 6)
    abstract_h = abstract_lines * _LINE[9.0]
    b.add_text(
        0,
        BoundingBox(72.0, 120.0, FULL_RIGHT, 120.0 + abstract_h),
        _text(rng, abstract_lines * 9),
        BODY_FONT,
        9.0,
        BlockLabel.BODY_TEXT,
    )
    foot_w = rng.uniform(120.0, 170.0)
    b.add_text(
        0,
        BoundingBox(72.0, 694.0, 72.0 + foot_w, 694.0 + _LINE[7.0]),
        f"* {_sentence(rng, rng.randint(6, 9))}",
        BODY_FONT,
        7.0,
        BlockLabel.ACCESSORY,
    )

    f = _Flow(b, first_page_top=120.0 + abstract_h + 18.0)

    # plan the body: specials (zones and equations) are always preceded
    # and followed by a paragraph so runs never bleed across elements
    n_sections = 6
    specials: list[str] = ["figure"] * 5 + ["table"] * (1 if continuous_tables else 3)
    specials += ["equation"] * 14
    if continuous_tables:
        specials.append("continuous")
    rng.shuffle(specials)
    per_section: list[list[str]] = [[] for _ in range(n_sections)]
    for i, sp in enumerate(specials):
        per_section[i % n_sections].append(sp)

    for sec in range(n_sections):
        _emit_heading(b, f, str(sec + 1))
        if rng.random() < 0.5:
            _emit_heading(b, f, f"{sec + 1}.1")
        units = [["paragraph", sp] for sp in per_section[sec]]
        units += [["paragraph"]]
        rng.shuffle(units)
        for unit in units:
            for kind in unit:
                if kind == "paragraph":
                    _emit_paragraph(b, f)
                elif kind == "figure":
                    _emit_figure(b, f)
                elif kind == "table":
                    _emit_table(b, f)
                elif kind == "equation":
                    _emit_equation(b, f)
                elif kind == "continuous":
                    _emit_continuous_tables(b, f)
        _emit_paragraph(b, f)

    # references
    f.ensure(_LINE[12.0] + 60.0)
    x0, _ = f.col_bounds
    b.add_text(
        f.page,
        BoundingBox(x0, f.y, x0 + 90.0, f.y + _LINE[12.0]),
        "References",
        HEADING_FONT,
        12.0,
        BlockLabel.SUPPLEMENT,
    )
    f.y += _LINE[12.0] + 8.0
    for i in range(rng.randint(13, 15)):
        _emit_reference(b, f, i + 1)

    # appendix
    f.ensure(_LINE[12.0] + 60.0)
    x0, _ = f.col_bounds
    b.add_text(
        f.page,
        BoundingBox(x0, f.y, x0 + rng.uniform(140.0, 200.0), f.y + _LINE[12.0]),
        f"Appendix A. {rng.choice(_HEAD_WORDS)}",
        HEADING_FONT,
        12.0,
        BlockLabel.SUPPLEMENT,
    )
    f.y += _LINE[12.0] + 8.0
    for _ in range(rng.randint(3, 4)):
        _emit_paragraph(b, f)

    return b.finish()


def generate_corpus(n_docs: int = 10, seed: int = 0) -> list[SynthDocument]:
    return [generate_document(i, seed) for i in range(n_docs)]


def corpus_feature_rows(docs: list[SynthDocument]) -> list[FeatureRow]:
    """Labeled training rows for a corpus; image blocks are left out."""
    rows: list[FeatureRow] = []
    for sd in docs:
        image_ids = {b.block_id for b in sd.document.iter_blocks() if not b.is_text}
        rows.extend(
            r
            for r in feature_rows(sd.document, sd.labels)
            if r.block_id not in image_ids
        )
    return rows


def corpus_gold_zones(docs: list[SynthDocument]) -> list[GoldZone]:
    return [z for sd in docs for z in sd.zones]
