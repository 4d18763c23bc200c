"""Regenerate the bundled fixtures.

Writes fixtures/synth_2col.json (a 14-block two-column page with a
five-block figure cluster, references, and an appendix) plus
fixtures/model.json (a classifier trained on the default 10-document
synthetic corpus) and fixtures/synth_2col.gold.json (expected labels
and the expected figure zone). Deterministic: reruns produce identical
bytes, and the test suite checks the committed files against a rerun.
"""

from __future__ import annotations

import json
from pathlib import Path

from tbrf.blocks import BoundingBox
from tbrf.classifier import DEFAULT_HYPERPARAMS, LabeledDataset, SvmClassifier, train
from tbrf.evaluation import dump_json
from tbrf.ingest import assign_reading_order, parse_block_dump, serialize_document
from tbrf.synth import corpus_feature_rows, generate_corpus

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def _block(block_id, kind, bbox, text, font=None, size=None):
    spans = []
    if kind == "text":
        spans = [{"font": font, "size": float(size), "chars": len(text)}]
    return {
        "block_id": block_id,
        "kind": kind,
        "bbox": [float(v) for v in bbox],
        "text": text,
        "spans": spans,
    }


def build_synth_2col() -> dict:
    blocks = [
        _block(0, "text", (72, 40, 534, 59),
               "Margin encodings for stream layouts", "SerifTitle", 16),
        # left column
        _block(1, "text", (72, 72, 212, 86), "1 Overview", "SansBold", 12),
        _block(2, "text", (72, 98, 297, 146),
               "Frame metrics keep spacing stable across pages. Column weights "
               "bound each glyph trace. Order signals remain coherent.",
               "SerifBody", 10),
        _block(3, "image", (72, 158, 297, 238), ""),
        _block(4, "text", (90, 242, 250, 252), "Kernel trace", "SansLabel", 8),
        _block(5, "text", (96, 256, 230, 266), "Weight bound", "SansLabel", 8),
        _block(6, "text", (88, 270, 262, 280), "Stride panel", "SansLabel", 8),
        _block(7, "text", (94, 284, 240, 294), "Metric axis", "SansLabel", 8),
        _block(8, "text", (72, 300, 297, 311),
               "Figure 1: Spacing grid over one column.", "SerifItalic", 9),
        _block(9, "text", (72, 325, 297, 385),
               "Region bounds follow the page stream. Vector panels stay in "
               "order. Glyph counts weight the corpus signal per column.",
               "SerifBody", 10),
        # right column
        _block(10, "text", (315, 72, 405, 86), "References", "SansBold", 12),
        _block(11, "text", (315, 98, 540, 122),
               "[1] Stream order and frame weights. Layout notes.",
               "SerifBody", 10),
        _block(12, "text", (315, 134, 490, 148), "Appendix A. Notes", "SansBold", 12),
        _block(13, "text", (315, 160, 540, 220),
               "Trace spans hold the metric order. Panel weights bound the "
               "stream. Corpus margins stay fixed per page.",
               "SerifBody", 10),
    ]
    return {
        "doc_id": "synth-2col",
        "pages": [
            {"page_index": 0, "width": 612.0, "height": 792.0, "blocks": blocks}
        ],
    }


GOLD_LABELS = {
    0: "Accessory",
    1: "Supplement",
    2: "BodyText",
    3: "Supplement",
    4: "Supplement",
    5: "Supplement",
    6: "Supplement",
    7: "Supplement",
    8: "Supplement",
    9: "BodyText",
    10: "Supplement",
    11: "BodyText",
    12: "Supplement",
    13: "BodyText",
}

# five-block cluster (image + four label rows), widened to the caption
GOLD_ZONE = {
    "kind": "Figure",
    "number": 1,
    "bbox": list(BoundingBox(72.0, 158.0, 297.0, 294.0).as_list()),
    "cluster": [3, 4, 5, 6, 7],
    "body_font": "SerifBody",
    "body_font_size": 10.0,
}


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)

    dump = build_synth_2col()
    doc = assign_reading_order(parse_block_dump(json.dumps(dump)))
    (FIXTURES / "synth_2col.json").write_text(serialize_document(doc))

    gold = {
        "doc_id": "synth-2col",
        "labels": [
            {"block_id": bid, "label": GOLD_LABELS[bid]} for bid in sorted(GOLD_LABELS)
        ],
        "zone": GOLD_ZONE,
    }
    (FIXTURES / "synth_2col.gold.json").write_text(dump_json(gold))

    rows = corpus_feature_rows(generate_corpus(10, seed=0))
    model = train(LabeledDataset.from_rows(rows), DEFAULT_HYPERPARAMS, seed=0)
    (FIXTURES / "model.json").write_text(dump_json(model.to_json_dict()))

    print(f"wrote {FIXTURES / 'synth_2col.json'}")
    print(f"wrote {FIXTURES / 'synth_2col.gold.json'}")
    print(f"wrote {FIXTURES / 'model.json'}")


if __name__ == "__main__":
    main()
