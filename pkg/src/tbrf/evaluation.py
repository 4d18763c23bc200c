"""Evaluation: classification metrics, zone IoU matching, overlay report.

Classification rows cover the classes present in the gold labels, in
canonical order, plus a "macro" row averaging them. A class never
predicted gets precision 0 by convention (no credit for silence).

Zone detection is scored per (doc_id, kind, number) key: a prediction
with the right key is accepted when its IoU with the gold zone clears
the threshold. Accuracy is accepted / gold per kind. Unmatched
predictions are false alarms; unmatched gold zones are misses.
"""

from __future__ import annotations

import html
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .blocks import (
    BoundingBox,
    Document,
    ZoneDetection,
    ZoneKind,
)
from .classifier import canonical_classes
from .errors import DimensionMismatchError, KeyMismatchError, SchemaError


def classification_report(
    pred: Sequence[str] | Mapping, gold: Sequence[str] | Mapping
) -> dict[str, dict[str, float]]:
    """Per-class precision/recall/f1 plus a macro "all-label" row.

    ``pred`` and ``gold`` are either aligned sequences or mappings with
    identical key sets (block_id to label); mismatched keys raise
    KeyMismatchError because the two sides would describe different
    block populations.
    """
    if isinstance(pred, Mapping) != isinstance(gold, Mapping):
        raise DimensionMismatchError(
            "pred and gold must both be mappings or both sequences"
        )
    if isinstance(pred, Mapping):
        missing = sorted(set(gold) - set(pred))
        extra = sorted(set(pred) - set(gold))
        if missing or extra:
            raise KeyMismatchError(
                f"{len(missing)} gold keys lack predictions, "
                f"{len(extra)} predictions lack gold",
                missing=[str(k) for k in missing[:10]],
                extra=[str(k) for k in extra[:10]],
            )
        keys = sorted(gold)
        gold = [gold[k] for k in keys]
        pred = [pred[k] for k in keys]
    if len(gold) != len(pred):
        raise DimensionMismatchError(
            f"{len(gold)} gold labels vs {len(pred)} predictions"
        )
    if not gold:
        raise DimensionMismatchError("cannot evaluate zero rows")
    classes = canonical_classes(gold)
    report: dict[str, dict[str, float]] = {}
    for cls in classes:
        tp = sum(1 for g, p in zip(gold, pred) if g == cls and p == cls)
        fp = sum(1 for g, p in zip(gold, pred) if g != cls and p == cls)
        fn = sum(1 for g, p in zip(gold, pred) if g == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        report[cls] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": float(tp + fn),
        }
    rows = [report[c] for c in classes]
    report["macro"] = {
        "precision": sum(r["precision"] for r in rows) / len(rows),
        "recall": sum(r["recall"] for r in rows) / len(rows),
        "f1": sum(r["f1"] for r in rows) / len(rows),
        "support": float(len(gold)),
    }
    return report


# ---------------------------------------------------------------------------
# Zone detection scoring
# ---------------------------------------------------------------------------


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union; 0 when the union has no area."""
    ix0 = max(a.x0, b.x0)
    iy0 = max(a.y0, b.y0)
    ix1 = min(a.x1, b.x1)
    iy1 = min(a.y1, b.y1)
    inter = max(0.0, ix1 - ix0) * max(0.0, iy1 - iy0)
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return inter / union


@dataclass(frozen=True, slots=True)
class GoldZone:
    """Ground-truth zone: where a numbered figure or table really sits."""

    doc_id: str
    kind: ZoneKind
    number: int
    bbox: BoundingBox

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.doc_id, self.kind.value, self.number)


def gold_zones_from_json_dict(data: dict) -> list[GoldZone]:
    if not isinstance(data, dict) or not isinstance(data.get("zones"), list):
        raise SchemaError("gold zones file must be {doc_id, zones: [...]}")
    doc_id = data.get("doc_id")
    if not isinstance(doc_id, str):
        raise SchemaError("gold zones doc_id must be a string")
    zones = []
    for i, raw in enumerate(data["zones"]):
        try:
            zones.append(
                GoldZone(
                    doc_id=doc_id,
                    kind=ZoneKind(raw["kind"]),
                    number=int(raw["number"]),
                    bbox=BoundingBox(*[float(v) for v in raw["bbox"]]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"zones[{i}] is malformed: {exc}")
    return zones


def detection_report(
    pred: Iterable[tuple[str, ZoneDetection]],
    gold: Iterable[GoldZone],
    iou_threshold: float = 0.8,
) -> dict:
    """Score predicted (doc_id, detection) pairs against gold zones."""
    gold_by_key: dict[tuple[str, str, int], GoldZone] = {}
    for gz in gold:
        if gz.key in gold_by_key:
            raise SchemaError(f"duplicate gold zone key {gz.key}")
        gold_by_key[gz.key] = gz

    pred_by_key: dict[tuple[str, str, int], ZoneDetection] = {}
    false_alarms: list[dict] = []
    for doc_id, det in pred:
        key = (doc_id, det.kind.value, det.number)
        if key in pred_by_key:
            false_alarms.append(_det_entry(key, det, reason="duplicate key"))
            continue
        pred_by_key[key] = det

    matches: list[dict] = []
    missed: list[dict] = []
    per_kind = {
        kind.value: {"gold": 0, "accepted": 0, "accuracy": 0.0}
        for kind in ZoneKind
    }
    for key in sorted(gold_by_key):
        gz = gold_by_key[key]
        per_kind[gz.kind.value]["gold"] += 1
        det = pred_by_key.pop(key, None)
        if det is None:
            missed.append(
                {"doc_id": key[0], "kind": key[1], "number": key[2]}
            )
            continue
        value = iou(gz.bbox, det.zone)
        accepted = value >= iou_threshold
        if accepted:
            per_kind[gz.kind.value]["accepted"] += 1
        matches.append(
            {
                "doc_id": key[0],
                "kind": key[1],
                "number": key[2],
                "iou": value,
                "accepted": accepted,
            }
        )
    for key in sorted(pred_by_key):
        false_alarms.append(_det_entry(key, pred_by_key[key], reason="no gold zone"))

    for row in per_kind.values():
        if row["gold"]:
            row["accuracy"] = row["accepted"] / row["gold"]
    total_gold = sum(r["gold"] for r in per_kind.values())
    total_accepted = sum(r["accepted"] for r in per_kind.values())
    return {
        "iou_threshold": iou_threshold,
        "per_kind": per_kind,
        "overall": {
            "gold": total_gold,
            "accepted": total_accepted,
            "accuracy": total_accepted / total_gold if total_gold else 0.0,
        },
        "matches": matches,
        "missed": missed,
        "false_alarms": false_alarms,
    }


def _det_entry(key: tuple[str, str, int], det: ZoneDetection, reason: str) -> dict:
    return {
        "doc_id": key[0],
        "kind": key[1],
        "number": key[2],
        "bbox": det.zone.as_list(),
        "reason": reason,
    }


def format_classification_table(report: Mapping[str, Mapping[str, float]]) -> str:
    """Fixed-width text table: one row per label plus the all-label row."""
    header = f"{'Label':<12} {'Precision':>9} {'Recall':>9} {'F1':>9} {'Support':>8}"
    lines = [header, "-" * len(header)]
    for name, row in report.items():
        display = "All label" if name == "macro" else name
        lines.append(
            f"{display:<12} {row['precision']:>9.3f} {row['recall']:>9.3f} "
            f"{row['f1']:>9.3f} {int(row['support']):>8d}"
        )
    return "\n".join(lines)


def format_detection_table(report: Mapping) -> str:
    """Fixed-width text table of per-kind detection accuracy."""
    header = f"{'Kind':<8} {'Gold':>6} {'Accepted':>9} {'Accuracy':>9}"
    lines = [header, "-" * len(header)]
    for kind, row in report["per_kind"].items():
        lines.append(
            f"{kind:<8} {row['gold']:>6d} {row['accepted']:>9d} {row['accuracy']:>9.3f}"
        )
    overall = report["overall"]
    lines.append(
        f"{'All':<8} {overall['gold']:>6d} {overall['accepted']:>9d} "
        f"{overall['accuracy']:>9.3f}"
    )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Overlay report
# ---------------------------------------------------------------------------

_OVERLAY_CSS = """
body { font-family: sans-serif; margin: 1rem; background: #fafafa; }
h1 { font-size: 1.2rem; }
.page { margin-bottom: 1.5rem; }
.page svg { background: #fff; border: 1px solid #999; cursor: grab; }
.block { fill-opacity: 0.25; stroke-width: 1; }
.label-bodytext { fill: #2c7fb8; stroke: #2c7fb8; }
.label-supplement { fill: #41ab5d; stroke: #41ab5d; }
.label-accessory { fill: #e08214; stroke: #e08214; }
.label-none { fill: #aaaaaa; stroke: #777777; }
.zone { fill: none; stroke: #d7191c; stroke-width: 2; stroke-dasharray: 6 3; }
.zone-label { font-size: 9px; fill: #d7191c; }
.warnings { background: #fff3cd; border: 1px solid #ddc56a; padding: 0.5rem 1rem; }
.legend span { margin-right: 1rem; }
.swatch { display: inline-block; width: 0.8em; height: 0.8em; margin-right: 0.3em; }
"""

_OVERLAY_JS = """
document.querySelectorAll('.page svg').forEach(function (svg) {
  var vb = svg.viewBox.baseVal;
  var base = {x: vb.x, y: vb.y, w: vb.width, h: vb.height};
  var drag = null;
  svg.addEventListener('wheel', function (ev) {
    ev.preventDefault();
    var k = ev.deltaY < 0 ? 0.85 : 1.18;
    var nw = Math.min(base.w * 4, Math.max(base.w / 16, vb.width * k));
    var nh = nw * base.h / base.w;
    vb.x += (vb.width - nw) / 2;
    vb.y += (vb.height - nh) / 2;
    vb.width = nw;
    vb.height = nh;
  });
  svg.addEventListener('mousedown', function (ev) {
    drag = {x: ev.clientX, y: ev.clientY};
  });
  window.addEventListener('mouseup', function () { drag = null; });
  svg.addEventListener('mousemove', function (ev) {
    if (!drag) return;
    var scale = vb.width / svg.clientWidth;
    vb.x -= (ev.clientX - drag.x) * scale;
    vb.y -= (ev.clientY - drag.y) * scale;
    drag = {x: ev.clientX, y: ev.clientY};
  });
  svg.addEventListener('dblclick', function () {
    vb.x = base.x; vb.y = base.y; vb.width = base.w; vb.height = base.h;
  });
});
"""


def render_overlay_report(
    doc: Document,
    labels: Mapping[int, str] | None = None,
    detections: Sequence[ZoneDetection] = (),
    title: str | None = None,
) -> str:
    """Static HTML page drawing every block and zone as SVG rectangles.

    Output is deterministic for identical inputs: no timestamps, stable
    iteration order. Blocks missing from ``labels`` render grey and are
    listed in a warnings panel.
    """
    labels = dict(labels or {})
    zones_by_page: dict[int, list[ZoneDetection]] = {}
    for det in detections:
        page = doc.page_of_block(det.caption_block_id)
        zones_by_page.setdefault(page.page_index, []).append(det)

    unlabeled: list[int] = []
    parts: list[str] = []
    parts.append("<!DOCTYPE html>")
    parts.append("<html><head><meta charset='utf-8'>")
    doc_title = html.escape(title if title is not None else doc.doc_id)
    parts.append(f"<title>{doc_title}</title>")
    parts.append(f"<style>{_OVERLAY_CSS}</style></head><body>")
    parts.append(f"<h1>{doc_title}</h1>")
    parts.append(
        "<p class='legend'>"
        "<span><span class='swatch label-bodytext'></span>BodyText</span>"
        "<span><span class='swatch label-supplement'></span>Supplement</span>"
        "<span><span class='swatch label-accessory'></span>Accessory</span>"
        "<span><span class='swatch label-none'></span>unlabeled</span>"
        "<span><span class='swatch' style='border:2px dashed #d7191c'></span>zone</span>"
        "</p>"
    )

    for page in sorted(doc.pages, key=lambda p: p.page_index):
        parts.append(f"<div class='page'><h2>Page {page.page_index}</h2>")
        parts.append(
            f"<svg viewBox='0 0 {_fmt(page.width)} {_fmt(page.height)}' "
            f"width='{_fmt(page.width)}' height='{_fmt(page.height)}' "
            "xmlns='http://www.w3.org/2000/svg'>"
        )
        for b in page.blocks:
            label = labels.get(b.block_id)
            if label is None:
                unlabeled.append(b.block_id)
                css = "label-none"
            else:
                css = f"label-{label.lower()}"
            snippet = html.escape(b.text[:80]) if b.text else f"[{b.kind.value}]"
            parts.append(
                f"<rect class='block {css}' x='{_fmt(b.bbox.x0)}' y='{_fmt(b.bbox.y0)}' "
                f"width='{_fmt(b.bbox.width)}' height='{_fmt(b.bbox.height)}'>"
                f"<title>block {b.block_id} ({label or 'unlabeled'}): {snippet}</title>"
                "</rect>"
            )
        for det in sorted(
            zones_by_page.get(page.page_index, ()),
            key=lambda d: (d.kind.value, d.number),
        ):
            z = det.zone
            parts.append(
                f"<rect class='zone' x='{_fmt(z.x0)}' y='{_fmt(z.y0)}' "
                f"width='{_fmt(z.width)}' height='{_fmt(z.height)}'>"
                f"<title>{det.kind.value} {det.number}</title></rect>"
            )
            parts.append(
                f"<text class='zone-label' x='{_fmt(z.x0)}' y='{_fmt(max(z.y0 - 2.0, 8.0))}'>"
                f"{det.kind.value} {det.number}</text>"
            )
        parts.append("</svg></div>")

    if unlabeled:
        items = ", ".join(str(b) for b in sorted(unlabeled))
        parts.append(
            f"<div class='warnings'><strong>Warnings</strong>: "
            f"{len(unlabeled)} blocks have no label: {html.escape(items)}</div>"
        )
    parts.append(f"<script>{_OVERLAY_JS}</script>")
    parts.append("</body></html>")
    return "\n".join(parts)


def _fmt(value: float) -> str:
    text = f"{value:.2f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def labels_to_json_dict(doc_id: str, labels: Mapping[int, str]) -> dict:
    return {
        "doc_id": doc_id,
        "labels": [
            {"block_id": int(k), "label": labels[k]} for k in sorted(labels)
        ],
    }


def labels_from_json_dict(data: dict) -> tuple[str, dict[int, str]]:
    if not isinstance(data, dict) or not isinstance(data.get("labels"), list):
        raise SchemaError("labels file must be {doc_id, labels: [...]}")
    doc_id = data.get("doc_id")
    if not isinstance(doc_id, str):
        raise SchemaError("labels doc_id must be a string")
    out: dict[int, str] = {}
    for i, raw in enumerate(data["labels"]):
        if (
            not isinstance(raw, dict)
            or not isinstance(raw.get("block_id"), int)
            or not isinstance(raw.get("label"), str)
        ):
            raise SchemaError(f"labels[{i}] must be {{block_id, label}}")
        if raw["block_id"] in out:
            raise SchemaError(f"labels[{i}]: duplicate block_id {raw['block_id']}")
        out[raw["block_id"]] = raw["label"]
    return doc_id, out


def detections_to_json_dict(doc_id: str, detections: Sequence[ZoneDetection]) -> dict:
    return {
        "doc_id": doc_id,
        "detections": [d.to_json_dict() for d in detections],
    }


def detections_from_json_dict(data: dict) -> tuple[str, list[ZoneDetection]]:
    from .blocks import zone_from_json_dict

    if not isinstance(data, dict) or not isinstance(data.get("detections"), list):
        raise SchemaError("detections file must be {doc_id, detections: [...]}")
    doc_id = data.get("doc_id")
    if not isinstance(doc_id, str):
        raise SchemaError("detections doc_id must be a string")
    dets = []
    for i, raw in enumerate(data["detections"]):
        try:
            dets.append(zone_from_json_dict(raw))
        except (KeyError, TypeError, ValueError, SchemaError) as exc:
            raise SchemaError(f"detections[{i}] is malformed: {exc}")
    return doc_id, dets


def dump_json(data: dict) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"
