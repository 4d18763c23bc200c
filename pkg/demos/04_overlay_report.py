#!/usr/bin/env python3
"""Render an HTML overlay of labels and zones for visual inspection.

Classifies a generated article with the bundled model, detects its
zones, and writes a self-contained HTML page drawing every block as a
color-coded rectangle with the detected zones outlined on top. Open the
file in a browser to eyeball where the classifier and the zone merger
disagree with the generator's ground truth.
"""

import json
from pathlib import Path

from tbrf.classifier import SvmClassifier, classify_document
from tbrf.evaluation import render_overlay_report
from tbrf.synth import generate_document
from tbrf.zones import detect_zones

HERE = Path(__file__).resolve().parent
MODEL = HERE.parent / "fixtures" / "model.json"
OUT = HERE / "build"


def main():
    clf = SvmClassifier.from_json_dict(json.loads(MODEL.read_text()))
    sd = generate_document(doc_index=2, seed=5)
    doc = sd.document

    labels = classify_document(doc, clf)
    detections = detect_zones(doc, labels)

    OUT.mkdir(exist_ok=True)
    predicted = OUT / f"{doc.doc_id}.predicted.html"
    predicted.write_text(
        render_overlay_report(doc, labels, detections, title=f"{doc.doc_id} (predicted)")
    )

    gold = OUT / f"{doc.doc_id}.gold.html"
    gold.write_text(
        render_overlay_report(doc, sd.labels, title=f"{doc.doc_id} (ground truth)")
    )

    flips = sum(1 for bid, lbl in labels.items() if sd.labels[bid] != lbl)
    print(f"document: {doc.doc_id}")
    print(f"label disagreements vs ground truth: {flips} of {len(labels)}")
    print(f"wrote {predicted}")
    print(f"wrote {gold}")


if __name__ == "__main__":
    main()
