"""Pattern rules: caption matching, section titles, document domains.

Captions are matched case-sensitively at the start of a block's text.
Section titles combine a numbering pattern with a font guard (the
title's dominant font must differ from the body font) so that body
sentences beginning with a digit are not promoted to headings.

Domain segmentation slices the global reading sequence into four
block-id ranges: basic info (title, authors, abstract), body,
references, and appendix. The references heading anchors the split and
must be present.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from .blocks import Document, TextBlock, ZoneKind
from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import DetectError
from .fonts import block_modal_font, document_body_font
from .ingest import reading_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class CaptionMatch:
    """A caption line anchoring one figure or table zone."""

    block_id: int
    page_index: int
    kind: ZoneKind
    number: int
    caption_text: str
    duplicate: bool = False


def match_caption(
    block: TextBlock, config: PipelineConfig = DEFAULT_CONFIG
) -> CaptionMatch | None:
    """Match the leading caption pattern of a block, if any."""
    if not block.is_text:
        return None
    m = config.compiled("caption_figure").match(block.text)
    kind = ZoneKind.FIGURE
    if m is None:
        m = config.compiled("caption_table").match(block.text)
        kind = ZoneKind.TABLE
    if m is None:
        return None
    return CaptionMatch(
        block_id=block.block_id,
        page_index=block.page_index,
        kind=kind,
        number=int(m.group("num")),
        caption_text=block.text,
    )


def find_captions(doc: Document, config: PipelineConfig = DEFAULT_CONFIG) -> list[CaptionMatch]:
    """All caption blocks in reading order.

    The first caption of each (kind, number) pair wins; later ones are
    kept but flagged as duplicates so the zone builder can skip them.
    Duplicates do occur legitimately: tables continued across columns
    repeat their caption line.
    """
    captions: list[CaptionMatch] = []
    seen: set[tuple[ZoneKind, int]] = set()
    for block in reading_sequence(doc):
        cap = match_caption(block, config)
        if cap is None:
            continue
        if (cap.kind, cap.number) in seen:
            logger.warning(
                "duplicate caption %s %d at block %d",
                cap.kind.value,
                cap.number,
                cap.block_id,
            )
            cap = CaptionMatch(
                cap.block_id, cap.page_index, cap.kind, cap.number, cap.caption_text, True
            )
        seen.add((cap.kind, cap.number))
        captions.append(cap)
    return captions


class SectionLevel(Enum):
    MAIN = "Main"
    SUB = "Sub"


@dataclass(frozen=True, slots=True)
class SectionTitle:
    block_id: int
    level: SectionLevel
    number: str
    title_text: str


def match_section_title(
    block: TextBlock, ctx, config: PipelineConfig = DEFAULT_CONFIG
) -> SectionTitle | None:
    """Numbered-heading check: pattern match plus a non-body-font guard.

    ``ctx`` is an encoding context (anything with a ``body_font``
    attribute) or the body font name itself.
    """
    if not block.is_text:
        return None
    body_font = ctx if isinstance(ctx, str) else ctx.body_font
    m = config.compiled("section_sub").match(block.text)
    level = SectionLevel.SUB
    if m is None:
        m = config.compiled("section_main").match(block.text)
        level = SectionLevel.MAIN
    if m is None:
        return None
    if block_modal_font(block) == body_font:
        return None
    return SectionTitle(
        block_id=block.block_id,
        level=level,
        number=m.group("num"),
        title_text=block.text,
    )


def scan_section_titles(
    doc: Document, ctx=None, config: PipelineConfig = DEFAULT_CONFIG
) -> list[SectionTitle]:
    """Section titles in reading order, warning on non-monotonic numbers."""
    if ctx is None:
        ctx, _ = document_body_font(doc)
    titles: list[SectionTitle] = []
    last_main = 0
    for block in reading_sequence(doc):
        title = match_section_title(block, ctx, config)
        if title is None:
            continue
        if title.level is SectionLevel.MAIN:
            number = int(title.number)
            if number < last_main:
                logger.warning(
                    "main section %d after %d at block %d breaks ordering",
                    number,
                    last_main,
                    title.block_id,
                )
            last_main = max(last_main, number)
        titles.append(title)
    return titles


@dataclass(frozen=True, slots=True)
class DomainSegmentation:
    """Block ids per document region, in reading order."""

    basic_info: tuple[int, ...]
    body: tuple[int, ...]
    references: tuple[int, ...]
    appendix: tuple[int, ...]
    body_start_id: int | None
    references_id: int
    appendix_id: int | None

    def domain_of(self, block_id: int) -> str:
        for name in ("basic_info", "body", "references", "appendix"):
            if block_id in getattr(self, name):
                return name
        raise KeyError(block_id)


def segment_domains(doc: Document, config: PipelineConfig = DEFAULT_CONFIG) -> DomainSegmentation:
    """Split the reading sequence at the numbering and heading markers.

    The references heading is mandatory. The body starts at the first
    numbered main-section block before it; with no such block the body
    opens the document and the basic-info range is empty. The appendix
    marker is only honored after the references heading, where a stray
    "A " at a line start cannot belong to the abstract or author list.
    """
    sequence = reading_sequence(doc)
    refs_re = config.compiled_marker("references")
    refs_pos = next(
        (i for i, b in enumerate(sequence) if b.is_text and refs_re.match(b.text)), None
    )
    if refs_pos is None:
        raise DetectError(
            f"document {doc.doc_id!r} has no references heading",
            pattern=config.domain_markers["references"],
        )

    section_re = config.compiled("section_main")
    body_pos = next(
        (
            i
            for i, b in enumerate(sequence[:refs_pos])
            if b.is_text and section_re.match(b.text)
        ),
        None,
    )

    appendix_re = config.compiled_marker("appendix")
    appendix_pos = next(
        (
            i
            for i, b in enumerate(sequence[refs_pos + 1 :], start=refs_pos + 1)
            if b.is_text and appendix_re.match(b.text)
        ),
        None,
    )

    ids = [b.block_id for b in sequence]
    body_lo = body_pos if body_pos is not None else 0
    appendix_lo = appendix_pos if appendix_pos is not None else len(ids)
    return DomainSegmentation(
        basic_info=tuple(ids[:body_lo]),
        body=tuple(ids[body_lo:refs_pos]),
        references=tuple(ids[refs_pos:appendix_lo]),
        appendix=tuple(ids[appendix_lo:]),
        body_start_id=ids[body_pos] if body_pos is not None else None,
        references_id=ids[refs_pos],
        appendix_id=ids[appendix_pos] if appendix_pos is not None else None,
    )
