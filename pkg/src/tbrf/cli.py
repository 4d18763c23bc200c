"""Command-line pipeline: validate, encode, train, classify, detect, score.

Stages communicate only through documented file formats (block dumps,
feature JSONL, model JSON, label JSON, detection JSON), so any stage can
be replayed or substituted. Every command is reproducible: identical
inputs, seed, and config produce byte-identical artifacts, HTML reports
excepted (those are DOM-stable instead).

Exit codes: 0 success, 1 domain error (machine-readable JSON on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .blocks import Document
from .classifier import (
    DEFAULT_HYPERPARAMS,
    LabeledDataset,
    SvmClassifier,
    SvmHyperparams,
    classify_document,
    repeated_eval,
    train,
)
from .config import ENV_CONFIG_VAR, PipelineConfig, load_config
from .encoder import feature_rows, read_features_jsonl, write_features_jsonl
from .errors import IoError, TbrfError
from .evaluation import (
    classification_report,
    detection_report,
    detections_from_json_dict,
    detections_to_json_dict,
    dump_json,
    format_classification_table,
    format_detection_table,
    gold_zones_from_json_dict,
    labels_from_json_dict,
    labels_to_json_dict,
    render_overlay_report,
)
from .ingest import assign_reading_order, parse_block_dump, serialize_document
from .zones import detect_zones

PROG = "tbrf"


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _load_document(path: str, config: PipelineConfig) -> Document:
    return assign_reading_order(parse_block_dump(_read_text(path)), config)


def _load_model(path: str) -> SvmClassifier:
    try:
        payload = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise IoError(f"model file {path} is not valid JSON: {exc}") from exc
    return SvmClassifier.from_json_dict(payload)


def _load_labels_file(path: str) -> tuple[str, dict[int, str]]:
    try:
        payload = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise IoError(f"labels file {path} is not valid JSON: {exc}") from exc
    return labels_from_json_dict(payload)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        _write_text(out, text)


# ---------------------------------------------------------------- commands


def _cmd_ingest(args: argparse.Namespace, config: PipelineConfig) -> int:
    doc = _load_document(args.dump, config)
    if args.output is not None:
        _write_text(args.output, serialize_document(doc))
        return 0
    n_text = sum(1 for b in doc.iter_blocks() if b.is_text)
    n_image = doc.block_count() - n_text
    sys.stdout.write(
        f"{doc.doc_id}: {len(doc.pages)} pages, {doc.block_count()} blocks "
        f"({n_text} text, {n_image} image)\n"
    )
    return 0


def _cmd_encode(args: argparse.Namespace, config: PipelineConfig) -> int:
    doc = _load_document(args.dump, config)
    labels = None
    if args.labels is not None:
        _, labels = _load_labels_file(args.labels)
    rows = feature_rows(doc, labels)
    _write_text(args.output, write_features_jsonl(rows))
    return 0


def _cmd_annotate(args: argparse.Namespace, config: PipelineConfig) -> int:
    rows = read_features_jsonl(_read_text(args.features))
    by_doc: dict[str, list[int]] = {}
    for row in rows:
        by_doc.setdefault(row.doc_id, []).append(row.block_id)
    templates = [
        {
            "doc_id": doc_id,
            "labels": [{"block_id": bid, "label": None} for bid in sorted(ids)],
        }
        for doc_id, ids in by_doc.items()
    ]
    payload = templates[0] if len(templates) == 1 else templates
    _emit(dump_json(payload), args.output)
    return 0


def _cmd_train(args: argparse.Namespace, config: PipelineConfig) -> int:
    rows = read_features_jsonl(_read_text(args.dataset))
    dataset = LabeledDataset.from_rows(rows)
    hp = SvmHyperparams(c=args.c, gamma=args.gamma, tol=args.tol)
    model = train(dataset, hp, seed=args.seed, strategy=args.strategy)
    _write_text(args.output, dump_json(model.to_json_dict()))
    return 0


def _cmd_classify(args: argparse.Namespace, config: PipelineConfig) -> int:
    doc = _load_document(args.dump, config)
    model = _load_model(args.model)
    labels = classify_document(doc, model)
    _emit(dump_json(labels_to_json_dict(doc.doc_id, labels)), args.output)
    return 0


def _cmd_detect(args: argparse.Namespace, config: PipelineConfig) -> int:
    doc = _load_document(args.dump, config)
    model = _load_model(args.model)
    labels = classify_document(doc, model)
    detections = detect_zones(
        doc, labels, config=config, include_appendix=args.include_appendix
    )
    _emit(dump_json(detections_to_json_dict(doc.doc_id, detections)), args.output)
    return 0


def _cmd_eval_cls(args: argparse.Namespace, config: PipelineConfig) -> int:
    pred: dict[tuple[str, int], str] = {}
    gold: dict[tuple[str, int], str] = {}
    for path in args.pred:
        doc_id, labels = _load_labels_file(path)
        pred.update({(doc_id, bid): lab for bid, lab in labels.items()})
    for path in args.gold:
        doc_id, labels = _load_labels_file(path)
        gold.update({(doc_id, bid): lab for bid, lab in labels.items()})
    report = classification_report(pred, gold)
    if args.json is not None:
        _write_text(args.json, dump_json(report))
    sys.stdout.write(format_classification_table(report) + "\n")
    return 0


def _cmd_eval_det(args: argparse.Namespace, config: PipelineConfig) -> int:
    pred = []
    for path in args.pred:
        doc_id, detections = detections_from_json_dict(
            json.loads(_read_text(path))
        )
        pred.extend((doc_id, det) for det in detections)
    gold = []
    for path in args.gold:
        gold.extend(gold_zones_from_json_dict(json.loads(_read_text(path))))
    report = detection_report(pred, gold, iou_threshold=args.iou_threshold)
    if args.json is not None:
        _write_text(args.json, dump_json(report))
    sys.stdout.write(format_detection_table(report) + "\n")
    return 0


def _cmd_eval_runs(args: argparse.Namespace, config: PipelineConfig) -> int:
    rows = read_features_jsonl(_read_text(args.dataset))
    dataset = LabeledDataset.from_rows(rows)
    hp = SvmHyperparams(c=args.c, gamma=args.gamma, tol=args.tol)
    result = repeated_eval(
        dataset,
        runs=args.runs,
        ratio=args.ratio,
        base_seed=args.seed,
        hyperparams=hp,
        strategy=args.strategy,
        jobs=args.jobs,
    )
    if args.json is not None:
        _write_text(args.json, dump_json(result))
    sys.stdout.write(_format_runs_table(result))
    return 0


def _format_runs_table(result: dict) -> str:
    lines = [
        f"runs={result['runs']} ratio={result['ratio']} base_seed={result['base_seed']}",
        f"{'Label':<12} {'Precision':>17} {'Recall':>17} {'F1':>17}",
    ]
    for name, metrics in result["summary"].items():
        label = "All label" if name == "macro" else name
        cells = [
            f"{metrics[m]['mean']:.4f} ± {metrics[m]['std']:.4f}"
            for m in ("precision", "recall", "f1")
        ]
        lines.append(f"{label:<12} {cells[0]:>17} {cells[1]:>17} {cells[2]:>17}")
    return "\n".join(lines) + "\n"


def _render_one(task: tuple[str, str | None, str | None, str, PipelineConfig]) -> None:
    dump_path, labels_path, zones_path, out_path, config = task
    doc = _load_document(dump_path, config)
    labels = None
    if labels_path is not None:
        _, labels = _load_labels_file(labels_path)
    detections = ()
    if zones_path is not None:
        _, detections = detections_from_json_dict(
            json.loads(_read_text(zones_path))
        )
    _write_text(out_path, render_overlay_report(doc, labels, detections))


def _cmd_report(args: argparse.Namespace, config: PipelineConfig) -> int:
    n = len(args.dump)
    labels = args.labels or []
    zones = args.zones or []
    if labels and len(labels) != n:
        raise IoError("--labels count must match the number of dumps")
    if zones and len(zones) != n:
        raise IoError("--zones count must match the number of dumps")

    if n == 1 and not Path(args.output).is_dir():
        outs = [args.output]
    else:
        out_dir = Path(args.output)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoError(f"cannot create {out_dir}: {exc}") from exc
        outs = [str(out_dir / (Path(d).stem + ".html")) for d in args.dump]

    tasks = [
        (d, labels[i] if labels else None, zones[i] if zones else None, outs[i], config)
        for i, d in enumerate(args.dump)
    ]
    if args.jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            list(pool.map(_render_one, tasks))
    else:
        for task in tasks:
            _render_one(task)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        default=None,
        help=f"config file (YAML/JSON); falls back to ${ENV_CONFIG_VAR}",
    )

    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Text-block refinement pipeline for scholarly page layouts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="validate a block dump")
    p.add_argument("dump")
    p.add_argument("-o", "--output", default=None, help="write normalized dump")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("encode", parents=[common], help="block dump to feature JSONL")
    p.add_argument("dump")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--labels", default=None, help="attach labels from a label file")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("annotate", parents=[common], help="emit a labeling template")
    p.add_argument("features")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_annotate)

    p = sub.add_parser("train", parents=[common], help="fit a classifier")
    p.add_argument("dataset")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--c", type=float, default=DEFAULT_HYPERPARAMS.c)
    p.add_argument("--gamma", type=float, default=DEFAULT_HYPERPARAMS.gamma)
    p.add_argument("--tol", type=float, default=DEFAULT_HYPERPARAMS.tol)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=("ovo", "ovr"), default="ovo")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("classify", parents=[common], help="label blocks in a dump")
    p.add_argument("dump")
    p.add_argument("--model", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("detect", parents=[common], help="detect figure/table zones")
    p.add_argument("dump")
    p.add_argument("--model", required=True)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--include-appendix", action="store_true")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("eval-cls", parents=[common], help="score predicted labels")
    p.add_argument("--pred", nargs="+", required=True)
    p.add_argument("--gold", nargs="+", required=True)
    p.add_argument("--json", default=None, help="also write the report as JSON")
    p.set_defaults(func=_cmd_eval_cls)

    p = sub.add_parser("eval-det", parents=[common], help="score detected zones")
    p.add_argument("--pred", nargs="+", required=True)
    p.add_argument("--gold", nargs="+", required=True)
    p.add_argument("--iou-threshold", type=float, default=0.8)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_eval_det)

    p = sub.add_parser(
        "eval-runs", parents=[common], help="repeated randomized split evaluation"
    )
    p.add_argument("dataset")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--ratio", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", type=float, default=DEFAULT_HYPERPARAMS.c)
    p.add_argument("--gamma", type=float, default=DEFAULT_HYPERPARAMS.gamma)
    p.add_argument("--tol", type=float, default=DEFAULT_HYPERPARAMS.tol)
    p.add_argument("--strategy", choices=("ovo", "ovr"), default="ovo")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_eval_runs)

    p = sub.add_parser("report", parents=[common], help="render HTML overlays")
    p.add_argument("dump", nargs="+")
    p.add_argument("-o", "--output", required=True, help="output file or directory")
    p.add_argument("--labels", nargs="*", default=None)
    p.add_argument("--zones", nargs="*", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except TbrfError as exc:
        sys.stderr.write(json.dumps(exc.to_json_dict(), sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
