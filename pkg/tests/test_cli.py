"""End-to-end tests of the command-line pipeline.

Most tests drive ``main(argv)`` in-process; exit-code-2 usage errors go
through a real subprocess since argparse terminates via SystemExit.
"""

import json
import subprocess
import sys

import pytest

from tbrf.cli import main
from tbrf.evaluation import dump_json, labels_to_json_dict
from tbrf.ingest import serialize_document
from tbrf.synth import generate_corpus

B, S, A = "BodyText", "Supplement", "Accessory"


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Corpus artifacts shared by the CLI tests: dumps, gold files, dataset."""
    root = tmp_path_factory.mktemp("pipeline")
    docs = generate_corpus(3, seed=0)
    entries = []
    dataset_lines = []
    for sd in docs:
        doc_id = sd.document.doc_id
        dump = root / f"{doc_id}.json"
        dump.write_text(serialize_document(sd.document))
        gold_labels = root / f"{doc_id}.labels.json"
        gold_labels.write_text(dump_json(labels_to_json_dict(doc_id, sd.labels)))
        gold_zones = root / f"{doc_id}.zones.json"
        gold_zones.write_text(
            dump_json(
                {
                    "doc_id": doc_id,
                    "zones": [
                        {
                            "kind": z.kind.value,
                            "number": z.number,
                            "bbox": z.bbox.as_list(),
                        }
                        for z in sd.zones
                    ],
                }
            )
        )
        feats = root / f"{doc_id}.features.jsonl"
        assert main(["encode", str(dump), "-o", str(feats), "--labels", str(gold_labels)]) == 0
        dataset_lines.append(feats.read_text())
        entries.append(
            {"dump": dump, "labels": gold_labels, "zones": gold_zones, "features": feats}
        )
    dataset = root / "dataset.jsonl"
    dataset.write_text("".join(dataset_lines))
    model = root / "model.json"
    assert main(["train", str(dataset), "-o", str(model), "--seed", "3"]) == 0
    return {"root": root, "docs": entries, "dataset": dataset, "model": model}


class TestIngest:
    def test_summary_line(self, pipeline, capsys):
        assert main(["ingest", str(pipeline["docs"][0]["dump"])]) == 0
        out = capsys.readouterr().out
        assert out.startswith("synth-0000-000:")
        assert "pages" in out and "text" in out and "image" in out

    def test_normalized_output_stable(self, pipeline, tmp_path):
        dump = str(pipeline["docs"][0]["dump"])
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["ingest", dump, "-o", str(a)]) == 0
        assert main(["ingest", dump, "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_file_is_io_error(self, tmp_path, capsys):
        assert main(["ingest", str(tmp_path / "absent.json")]) == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "IoError"


class TestEncodeAnnotate:
    def test_feature_rows_carry_labels(self, pipeline):
        rows = [
            json.loads(line)
            for line in pipeline["docs"][0]["features"].read_text().splitlines()
        ]
        assert all(r["label"] in (B, S, A) for r in rows)
        assert all(len(r["features"]) == 8 for r in rows)

    def test_encode_without_labels(self, pipeline, tmp_path):
        out = tmp_path / "plain.jsonl"
        assert main(["encode", str(pipeline["docs"][0]["dump"]), "-o", str(out)]) == 0
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        assert all(r["label"] is None for r in rows)

    def test_annotate_template_single_doc(self, pipeline, capsys):
        assert main(["annotate", str(pipeline["docs"][0]["features"])]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["doc_id"] == "synth-0000-000"
        assert all(e["label"] is None for e in data["labels"])
        ids = [e["block_id"] for e in data["labels"]]
        assert ids == sorted(ids)

    def test_annotate_template_multi_doc(self, pipeline, capsys):
        assert main(["annotate", str(pipeline["dataset"])]) == 0
        data = json.loads(capsys.readouterr().out)
        assert isinstance(data, list) and len(data) == 3


class TestTrainClassify:
    def test_model_file_shape(self, pipeline):
        model = json.loads(pipeline["model"].read_text())
        assert model["classes"] == [B, S, A]
        assert model["strategy"] == "ovo"
        assert model["metadata"]["seed"] == 3
        assert len(model["machines"]) == 3

    def test_classify_reproduces_gold(self, pipeline, tmp_path):
        entry = pipeline["docs"][1]
        pred = tmp_path / "pred.json"
        assert main(
            ["classify", str(entry["dump"]), "--model", str(pipeline["model"]), "-o", str(pred)]
        ) == 0
        assert json.loads(pred.read_text()) == json.loads(entry["labels"].read_text())

    def test_classify_stdout_mode(self, pipeline, capsys):
        entry = pipeline["docs"][0]
        assert main(
            ["classify", str(entry["dump"]), "--model", str(pipeline["model"])]
        ) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["doc_id"] == "synth-0000-000"

    def test_single_class_dataset_fails_cleanly(self, pipeline, tmp_path, capsys):
        rows = [
            json.loads(line)
            for line in pipeline["docs"][0]["features"].read_text().splitlines()
        ]
        for r in rows:
            r["label"] = B
        bad = tmp_path / "single.jsonl"
        bad.write_text("".join(json.dumps(r) + "\n" for r in rows))
        assert main(["train", str(bad), "-o", str(tmp_path / "m.json")]) == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "SingleClassError"

    def test_corrupt_model_is_io_error(self, pipeline, tmp_path, capsys):
        bad = tmp_path / "model.json"
        bad.write_text("{broken")
        entry = pipeline["docs"][0]
        assert main(["classify", str(entry["dump"]), "--model", str(bad)]) == 1
        assert json.loads(capsys.readouterr().err)["error"] == "IoError"


class TestDetectAndEval:
    def test_detect_matches_gold_zones(self, pipeline, tmp_path, capsys):
        entry = pipeline["docs"][2]
        zones = tmp_path / "zones.json"
        assert main(
            ["detect", str(entry["dump"]), "--model", str(pipeline["model"]), "-o", str(zones)]
        ) == 0
        report = tmp_path / "report.json"
        code = main(
            [
                "eval-det",
                "--pred", str(zones),
                "--gold", str(entry["zones"]),
                "--json", str(report),
            ]
        )
        assert code == 0
        table = capsys.readouterr().out
        assert table.splitlines()[-1].startswith("All")
        rep = json.loads(report.read_text())
        assert rep["overall"]["accuracy"] == 1.0
        assert rep["missed"] == [] and rep["false_alarms"] == []

    def test_eval_cls_table_and_json(self, pipeline, tmp_path, capsys):
        entry = pipeline["docs"][0]
        pred = tmp_path / "pred.json"
        main(["classify", str(entry["dump"]), "--model", str(pipeline["model"]), "-o", str(pred)])
        capsys.readouterr()
        report = tmp_path / "cls.json"
        code = main(
            [
                "eval-cls",
                "--pred", str(pred),
                "--gold", str(entry["labels"]),
                "--json", str(report),
            ]
        )
        assert code == 0
        assert "All label" in capsys.readouterr().out
        rep = json.loads(report.read_text())
        assert rep["macro"]["f1"] == 1.0

    def test_eval_cls_multiple_docs(self, pipeline, tmp_path, capsys):
        preds, golds = [], []
        for entry in pipeline["docs"]:
            pred = tmp_path / (entry["dump"].stem + ".pred.json")
            main(["classify", str(entry["dump"]), "--model", str(pipeline["model"]), "-o", str(pred)])
            preds.append(str(pred))
            golds.append(str(entry["labels"]))
        capsys.readouterr()
        assert main(["eval-cls", "--pred", *preds, "--gold", *golds]) == 0
        out = capsys.readouterr().out
        assert out.count("1.000") >= 12  # three classes plus macro, perfect

    def test_eval_runs(self, pipeline, tmp_path, capsys):
        out_json = tmp_path / "runs.json"
        code = main(
            [
                "eval-runs", str(pipeline["dataset"]),
                "--runs", "2",
                "--ratio", "0.5",
                "--json", str(out_json),
            ]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert stdout.startswith("runs=2 ratio=0.5")
        assert "All label" in stdout
        data = json.loads(out_json.read_text())
        assert len(data["per_run"]) == 2
        assert 0.0 <= data["summary"]["macro"]["f1"]["mean"] <= 1.0


class TestReport:
    def test_single_file_mode(self, pipeline, tmp_path):
        entry = pipeline["docs"][0]
        out = tmp_path / "page.html"
        code = main(
            [
                "report", str(entry["dump"]),
                "-o", str(out),
                "--labels", str(entry["labels"]),
            ]
        )
        assert code == 0
        html = out.read_text()
        assert html.startswith("<!DOCTYPE html>")
        assert "label-bodytext" in html

    def test_directory_mode_parallel(self, pipeline, tmp_path):
        out_dir = tmp_path / "reports"
        dumps = [str(e["dump"]) for e in pipeline["docs"]]
        labels = [str(e["labels"]) for e in pipeline["docs"]]
        code = main(
            ["report", *dumps, "-o", str(out_dir), "--labels", *labels, "--jobs", "2"]
        )
        assert code == 0
        files = sorted(p.name for p in out_dir.glob("*.html"))
        assert files == [
            "synth-0000-000.html",
            "synth-0000-001.html",
            "synth-0000-002.html",
        ]

    def test_label_count_mismatch(self, pipeline, tmp_path, capsys):
        entry = pipeline["docs"][0]
        code = main(
            [
                "report", str(entry["dump"]),
                "-o", str(tmp_path / "x.html"),
                "--labels", str(entry["labels"]), str(entry["labels"]),
            ]
        )
        assert code == 1
        assert json.loads(capsys.readouterr().err)["error"] == "IoError"


class TestDeterminism:
    def test_pipeline_artifacts_byte_identical(self, pipeline, tmp_path):
        entry = pipeline["docs"][0]
        outs = []
        for tag in ("one", "two"):
            d = tmp_path / tag
            d.mkdir()
            feats = d / "f.jsonl"
            model = d / "m.json"
            pred = d / "p.json"
            zones = d / "z.json"
            main(["encode", str(entry["dump"]), "-o", str(feats), "--labels", str(entry["labels"])])
            main(["train", str(feats), "-o", str(model)])
            main(["classify", str(entry["dump"]), "--model", str(model), "-o", str(pred)])
            main(["detect", str(entry["dump"]), "--model", str(model), "-o", str(zones)])
            outs.append((feats.read_bytes(), model.read_bytes(), pred.read_bytes(), zones.read_bytes()))
        assert outs[0] == outs[1]


def two_column_dump(tmp_path):
    from conftest import make_block, make_doc, make_page

    blocks = [
        make_block(0, (72, 72, 297, 100)),
        make_block(1, (315, 72, 540, 100)),
        make_block(2, (72, 400, 297, 430)),
    ]
    doc = make_doc([make_page(blocks)], doc_id="cols", ordered=False)
    path = tmp_path / "cols.json"
    path.write_text(serialize_document(doc))
    return path


def reading_orders(path):
    data = json.loads(path.read_text())
    return {b["block_id"]: b["reading_order"] for b in data["pages"][0]["blocks"]}


class TestConfigOverride:
    def test_config_flag_changes_column_logic(self, tmp_path):
        dump = two_column_dump(tmp_path)
        cfg = tmp_path / "cfg.yaml"
        # every block counts as wide, so each page reads as one column
        cfg.write_text("wide_block_ratio: 0.0\n")
        default_out = tmp_path / "default.json"
        forced_out = tmp_path / "forced.json"
        assert main(["ingest", str(dump), "-o", str(default_out)]) == 0
        assert main(["ingest", str(dump), "--config", str(cfg), "-o", str(forced_out)]) == 0
        assert reading_orders(default_out) == {0: 0, 2: 1, 1: 2}
        assert reading_orders(forced_out) == {0: 0, 1: 1, 2: 2}

    def test_env_var_config(self, tmp_path, monkeypatch):
        dump = two_column_dump(tmp_path)
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"wide_block_ratio": 0.0}')
        monkeypatch.setenv("TBRF_CONFIG", str(cfg))
        out = tmp_path / "env.json"
        assert main(["ingest", str(dump), "-o", str(out)]) == 0
        assert reading_orders(out) == {0: 0, 1: 1, 2: 2}

    def test_bad_config_reported(self, tmp_path, capsys):
        dump = two_column_dump(tmp_path)
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"single_column_fraction": "wide"}')
        assert main(["ingest", str(dump), "--config", str(cfg)]) == 1
        assert json.loads(capsys.readouterr().err)["error"] == "ConfigError"


class TestUsageErrors:
    def test_unknown_subcommand_exit_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "tbrf", "frobnicate"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2

    def test_missing_required_flag_exit_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "tbrf", "classify", "x.json"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        assert "--model" in proc.stderr

    def test_module_entry_point_works(self, pipeline):
        proc = subprocess.run(
            [sys.executable, "-m", "tbrf", "ingest", str(pipeline["docs"][0]["dump"])],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("synth-0000-000:")
