"""Text-block refinement for scholarly page layouts.

The package turns block dumps of born-digital articles into three-way
block labels (body text, supplement, accessory) and figure/table zones:

- :mod:`tbrf.ingest` validates dumps and assigns reading order,
- :mod:`tbrf.encoder` maps blocks to 8-dimensional feature vectors,
- :mod:`tbrf.classifier` trains and applies an RBF-kernel SVM,
- :mod:`tbrf.rules` finds captions, section titles, and domains,
- :mod:`tbrf.zones` merges supplement runs into caption-anchored zones,
- :mod:`tbrf.evaluation` scores labels and zones and renders overlays,
- :mod:`tbrf.synth` generates ground-truthed synthetic corpora,
- :mod:`tbrf.cli` exposes the whole pipeline as subcommands.
"""

from .blocks import (
    BlockKind,
    BlockLabel,
    BoundingBox,
    Document,
    Page,
    SpanFontStats,
    TextBlock,
    ZoneDetection,
    ZoneKind,
)
from .classifier import (
    DEFAULT_HYPERPARAMS,
    LabeledDataset,
    SvmClassifier,
    SvmHyperparams,
    classify_document,
    repeated_eval,
    split_dataset,
    train,
)
from .config import DEFAULT_CONFIG, PipelineConfig, load_config
from .encoder import (
    FEATURE_NAMES,
    EncodingContext,
    FeatureRow,
    FeatureVector,
    compute_context,
    encode_block,
    encode_document,
    feature_rows,
    read_features_jsonl,
    write_features_jsonl,
)
from .errors import TbrfError
from .evaluation import (
    GoldZone,
    classification_report,
    detection_report,
    iou,
    render_overlay_report,
)
from .ingest import assign_reading_order, parse_block_dump, serialize_document
from .rules import find_captions, scan_section_titles, segment_domains
from .synth import SynthDocument, generate_corpus, generate_document
from .zones import detect_zones

__version__ = "0.1.0"

__all__ = [
    "BlockKind",
    "BlockLabel",
    "BoundingBox",
    "DEFAULT_CONFIG",
    "DEFAULT_HYPERPARAMS",
    "Document",
    "EncodingContext",
    "FEATURE_NAMES",
    "FeatureRow",
    "FeatureVector",
    "GoldZone",
    "LabeledDataset",
    "Page",
    "PipelineConfig",
    "SpanFontStats",
    "SvmClassifier",
    "SvmHyperparams",
    "SynthDocument",
    "TbrfError",
    "TextBlock",
    "ZoneDetection",
    "ZoneKind",
    "assign_reading_order",
    "classification_report",
    "classify_document",
    "compute_context",
    "detect_zones",
    "detection_report",
    "encode_block",
    "encode_document",
    "feature_rows",
    "find_captions",
    "generate_corpus",
    "generate_document",
    "iou",
    "load_config",
    "parse_block_dump",
    "read_features_jsonl",
    "render_overlay_report",
    "repeated_eval",
    "scan_section_titles",
    "segment_domains",
    "serialize_document",
    "split_dataset",
    "train",
    "write_features_jsonl",
]
