"""Figure and table zone detection.

A zone is anchored by a caption block and filled with the neighboring
run of supplement material:

1. Per page and column, build maximal runs of consecutive blocks
   labeled Supplement (image blocks count as Supplement). Caption
   blocks neither join nor break a run; any other block does, as does a
   vertical gap wider than the page's gap threshold.
2. For each caption, take the nearest run ending above it (Prior) and
   the nearest run starting below it (Behind), select the one with the
   larger horizontal overlap with the caption block, break ties toward
   the larger run area, then toward the run above. No candidate at all
   yields the caption's own box as the zone, with a warning.
3. When two captions claim the same run (stacked tables with a caption
   above one and below the other), each member block goes to the
   caption whose vertical center is nearer; both zones are then
   reframed from their surviving members.
4. Frames widen to the caption's x-extent whenever the caption is the
   wider of the two; a frame wider than its caption is kept as is.

Appendix material is excluded by default: appendix layouts reuse
figure-like spacing for content with no numbered caption discipline,
so zones detected there are noise for the downstream consumer.
"""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .blocks import (
    BlockLabel,
    BoundingBox,
    Document,
    Page,
    TextBlock,
    ZoneDetection,
    union_all,
)
from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import CaptionNotOnPageError
from .ingest import assign_reading_order, column_of
from .rules import CaptionMatch, find_captions, segment_domains

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class SupplementRun:
    """Consecutive supplement blocks in one column of one page."""

    page_index: int
    column: int
    blocks: list[TextBlock]

    @property
    def frame(self) -> BoundingBox:
        return union_all([b.bbox for b in self.blocks])


def page_columns(page: Page, config: PipelineConfig = DEFAULT_CONFIG) -> dict[int, list[TextBlock]]:
    """Page blocks per column, each column in reading order."""
    ordered = sorted(
        page.blocks,
        key=lambda b: b.reading_order if b.reading_order is not None else b.block_id,
    )
    out: dict[int, list[TextBlock]] = {}
    for b in ordered:
        out.setdefault(column_of(b, page, config), []).append(b)
    return out


def page_gap_threshold(
    page: Page,
    labels: Mapping[int, str],
    config: PipelineConfig = DEFAULT_CONFIG,
) -> float:
    """1.5x the median vertical gap between adjacent body-text pairs.

    Scale-free: wide-set documents get a proportionally wider notion of
    "consecutive". Pages without two adjacent body blocks fall back to
    a fixed default.
    """
    gaps: list[float] = []
    for column in page_columns(page, config).values():
        for prev, nxt in zip(column, column[1:]):
            if (
                labels.get(prev.block_id) == BlockLabel.BODY_TEXT.value
                and labels.get(nxt.block_id) == BlockLabel.BODY_TEXT.value
            ):
                gaps.append(max(0.0, nxt.bbox.y0 - prev.bbox.y1))
    if not gaps:
        return config.run_gap_fallback
    return config.run_gap_factor * statistics.median(gaps)


def supplement_runs(
    page: Page,
    labels: Mapping[int, str],
    caption_ids: set[int] | None = None,
    excluded_ids: set[int] | None = None,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> list[SupplementRun]:
    """Maximal runs of supplement material per column of one page."""
    caption_ids = caption_ids or set()
    excluded_ids = excluded_ids or set()
    threshold = page_gap_threshold(page, labels, config)

    def is_material(b: TextBlock) -> bool:
        if b.block_id in excluded_ids:
            return False
        if not b.is_text:
            return True
        return labels.get(b.block_id) == BlockLabel.SUPPLEMENT.value

    runs: list[SupplementRun] = []
    for col_idx, column in sorted(page_columns(page, config).items()):
        current: list[TextBlock] = []
        for b in column:
            if b.block_id in caption_ids:
                continue  # captions neither join nor break a run
            if not is_material(b):
                if current:
                    runs.append(SupplementRun(page.page_index, col_idx, current))
                    current = []
                continue
            if current and b.bbox.y0 - current[-1].bbox.y1 > threshold:
                runs.append(SupplementRun(page.page_index, col_idx, current))
                current = []
            current.append(b)
        if current:
            runs.append(SupplementRun(page.page_index, col_idx, current))
    return runs


def _apply_width_rule(frame: BoundingBox, caption: BoundingBox) -> BoundingBox:
    if frame.width > caption.width:
        return frame
    return BoundingBox(caption.x0, frame.y0, caption.x1, frame.y1)


def _pick_run(
    caption_box: BoundingBox,
    above: SupplementRun | None,
    below: SupplementRun | None,
) -> SupplementRun | None:
    if above is None:
        return below
    if below is None:
        return above
    ov_above = above.frame.horizontal_overlap(caption_box)
    ov_below = below.frame.horizontal_overlap(caption_box)
    if ov_above != ov_below:
        return above if ov_above > ov_below else below
    if above.frame.area != below.frame.area:
        return above if above.frame.area > below.frame.area else below
    return above


def merge_zone_for_caption(
    caption: CaptionMatch,
    runs: Sequence[SupplementRun],
    page: Page,
    config: PipelineConfig = DEFAULT_CONFIG,
    max_gap: float | None = None,
) -> ZoneDetection:
    """Zone for one caption from that page's runs (no cross-caption dedup).

    With ``max_gap`` set, only runs within that vertical distance of the
    caption are candidates; the pipeline passes the page gap threshold
    here so a caption never adopts a far-away group that merely happens
    to be the nearest one on an otherwise empty side.
    """
    cap_block = next((b for b in page.blocks if b.block_id == caption.block_id), None)
    if cap_block is None:
        raise CaptionNotOnPageError(
            f"caption block {caption.block_id} is not on page {page.page_index}",
            block_id=caption.block_id,
            page_index=page.page_index,
        )
    cap_box = cap_block.bbox
    cap_col = column_of(cap_block, page, config)
    local = [r for r in runs if r.page_index == page.page_index and r.column == cap_col]
    above_runs = [
        r for r in local if r.frame.y1 <= cap_box.y0 + config.zone_overlap_tolerance
    ]
    below_runs = [
        r for r in local if r.frame.y0 >= cap_box.y1 - config.zone_overlap_tolerance
    ]
    if max_gap is not None:
        above_runs = [r for r in above_runs if cap_box.y0 - r.frame.y1 <= max_gap]
        below_runs = [r for r in below_runs if r.frame.y0 - cap_box.y1 <= max_gap]
    above = max(above_runs, key=lambda r: r.frame.y1, default=None)
    below = min(below_runs, key=lambda r: r.frame.y0, default=None)
    run = _pick_run(cap_box, above, below)
    if run is None:
        logger.warning(
            "caption %s %d at block %d has no supplement run; using caption box",
            caption.kind.value,
            caption.number,
            caption.block_id,
        )
        return ZoneDetection(
            kind=caption.kind,
            number=caption.number,
            caption_block_id=caption.block_id,
            zone=cap_box,
            member_block_ids=(),
        )
    return ZoneDetection(
        kind=caption.kind,
        number=caption.number,
        caption_block_id=caption.block_id,
        zone=_apply_width_rule(run.frame, cap_box),
        member_block_ids=tuple(sorted(b.block_id for b in run.blocks)),
    )


def detect_zones(
    doc: Document,
    labels: Mapping[int, str],
    captions: Sequence[CaptionMatch] | None = None,
    config: PipelineConfig = DEFAULT_CONFIG,
    include_appendix: bool = False,
) -> list[ZoneDetection]:
    """Detect figure and table zones from predicted block labels."""
    if any(b.reading_order is None for b in doc.iter_blocks()):
        doc = assign_reading_order(doc, config)

    excluded_ids: set[int] = set()
    if not include_appendix:
        excluded_ids = set(segment_domains(doc, config).appendix)
    if captions is None:
        captions = [
            c for c in find_captions(doc, config) if c.block_id not in excluded_ids
        ]
    caption_ids = {c.block_id for c in captions}

    pages = {p.page_index: p for p in doc.pages}
    runs_by_page = {
        idx: supplement_runs(p, labels, caption_ids, excluded_ids, config)
        for idx, p in pages.items()
    }
    gap_by_page = {
        idx: page_gap_threshold(p, labels, config) for idx, p in pages.items()
    }

    raw: list[ZoneDetection] = []
    kept_captions: list[CaptionMatch] = []
    for cap in captions:
        if cap.duplicate:
            continue
        page = pages.get(cap.page_index)
        if page is None:
            raise CaptionNotOnPageError(
                f"caption block {cap.block_id} names missing page {cap.page_index}",
                block_id=cap.block_id,
                page_index=cap.page_index,
            )
        raw.append(
            merge_zone_for_caption(
                cap,
                runs_by_page[cap.page_index],
                page,
                config,
                max_gap=gap_by_page[cap.page_index],
            )
        )
        kept_captions.append(cap)

    detections = _dedup_members(doc, raw, kept_captions)
    detections.sort(key=lambda d: (d.kind.value, d.number))
    return detections


def _dedup_members(
    doc: Document,
    detections: list[ZoneDetection],
    captions: Sequence[CaptionMatch],
) -> list[ZoneDetection]:
    """Give each shared member block to the vertically nearest caption."""
    claims: dict[int, list[int]] = {}
    for det_idx, det in enumerate(detections):
        for block_id in det.member_block_ids:
            claims.setdefault(block_id, []).append(det_idx)
    if all(len(v) == 1 for v in claims.values()):
        return list(detections)

    cap_centers = {
        i: doc.block_by_id(captions[i].block_id).bbox.center_y
        for i in range(len(detections))
    }
    members: dict[int, list[int]] = {i: [] for i in range(len(detections))}
    for block_id, claimants in claims.items():
        if len(claimants) == 1:
            members[claimants[0]].append(block_id)
            continue
        center = doc.block_by_id(block_id).bbox.center_y
        winner = min(claimants, key=lambda i: (abs(center - cap_centers[i]), i))
        members[winner].append(block_id)

    out: list[ZoneDetection] = []
    for det_idx, det in enumerate(detections):
        mine = sorted(members[det_idx])
        if mine == sorted(det.member_block_ids):
            out.append(det)
            continue
        cap_box = doc.block_by_id(det.caption_block_id).bbox
        if not mine:
            logger.warning(
                "caption %s %d lost all member blocks in dedup; using caption box",
                det.kind.value,
                det.number,
            )
            out.append(
                ZoneDetection(det.kind, det.number, det.caption_block_id, cap_box, ())
            )
            continue
        frame = union_all([doc.block_by_id(b).bbox for b in mine])
        out.append(
            ZoneDetection(
                det.kind,
                det.number,
                det.caption_block_id,
                _apply_width_rule(frame, cap_box),
                tuple(mine),
            )
        )
    return out
