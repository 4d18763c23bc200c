"""Shared builders for hand-crafted documents used across test modules."""

from __future__ import annotations

from pathlib import Path

import pytest

from tbrf.blocks import BlockKind, BoundingBox, Document, Page, SpanFontStats, TextBlock
from tbrf.ingest import assign_reading_order

FIXTURES = Path(__file__).parent.parent / "fixtures"

# Verdict lines queued by the acceptance tests; echoed after the run so
# the scoreboard is visible even with output capture on.
ACCEPTANCE_VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)


def make_block(
    block_id: int,
    bbox: tuple[float, float, float, float],
    text: str = "Sample words here.",
    font: str = "SerifBody",
    size: float = 10.0,
    page_index: int = 0,
    kind: BlockKind = BlockKind.TEXT,
    spans: tuple[SpanFontStats, ...] | None = None,
) -> TextBlock:
    if kind is BlockKind.IMAGE:
        return TextBlock(block_id, page_index, BoundingBox(*bbox), kind, "", ())
    if spans is None:
        spans = (SpanFontStats(font, size, max(len(text), 1)),)
    return TextBlock(block_id, page_index, BoundingBox(*bbox), kind, text, spans)


def make_page(blocks, page_index: int = 0, width: float = 612.0, height: float = 792.0) -> Page:
    return Page(page_index, width, height, tuple(blocks))


def make_doc(pages, doc_id: str = "doc-test", ordered: bool = True) -> Document:
    doc = Document(doc_id, tuple(pages))
    return assign_reading_order(doc) if ordered else doc


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES
