"""Pipeline configuration: rule regexes and layout thresholds.

Every pattern and threshold the rule-based stages depend on can be
overridden per publication venue from a JSON or YAML file. Documented
keys (all optional, defaults below):

    caption_figure, caption_table   caption regexes; group "num" holds the number
    section_main, section_sub       section-title regexes; group "num"
    domain_markers                  mapping with abstract / references / appendix
    single_column_fraction          share of wide text blocks that flags one column
    wide_block_ratio                width/page-width ratio that counts as "wide"
    run_gap_factor                  supplement-run gap = factor * median body gap
    run_gap_fallback                gap threshold (pt) when a page has no body text
    zone_overlap_tolerance          slack (pt) when testing run-above/below caption
    iou_threshold                   acceptance IoU for detection evaluation
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .errors import ConfigError

ENV_CONFIG_VAR = "TBRF_CONFIG"

DEFAULT_DOMAIN_MARKERS = {
    "abstract": r"^Abstract\b",
    "references": r"^References\b",
    "appendix": r"(?i)^(?:Appendix|A\s)",
}


@dataclass(frozen=True)
class PipelineConfig:
    caption_figure: str = r"^(?:Figure|Fig\.?)\s*(?P<num>\d+)\s*[:.]"
    caption_table: str = r"^Table\s*(?P<num>\d+)\s*[:.]"
    section_main: str = r"^(?P<num>\d+)\s+\S"
    section_sub: str = r"^(?P<num>\d+\.\d+(?:\.\d+)?)\s+\S"
    domain_markers: dict = field(default_factory=lambda: dict(DEFAULT_DOMAIN_MARKERS))
    single_column_fraction: float = 0.8
    wide_block_ratio: float = 0.6
    run_gap_factor: float = 1.5
    run_gap_fallback: float = 18.0
    zone_overlap_tolerance: float = 2.0
    iou_threshold: float = 0.8

    def compiled(self, name: str) -> re.Pattern:
        try:
            return re.compile(getattr(self, name))
        except re.error as exc:
            raise ConfigError(f"invalid regex for {name!r}: {exc}", key=name) from exc

    def compiled_marker(self, name: str) -> re.Pattern:
        pattern = self.domain_markers.get(name, DEFAULT_DOMAIN_MARKERS[name])
        try:
            return re.compile(pattern)
        except re.error as exc:
            raise ConfigError(
                f"invalid regex for domain_markers.{name}: {exc}", key=name
            ) from exc


DEFAULT_CONFIG = PipelineConfig()

_FLOAT_KEYS = (
    "single_column_fraction",
    "wide_block_ratio",
    "run_gap_factor",
    "run_gap_fallback",
    "zone_overlap_tolerance",
    "iou_threshold",
)
_PATTERN_KEYS = ("caption_figure", "caption_table", "section_main", "section_sub")


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Load overrides from ``path``, the TBRF_CONFIG env var, or defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG_VAR)
    if path is None:
        return DEFAULT_CONFIG
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}", path=str(path)) from exc
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(raw)
        else:
            data = json.loads(raw)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config file: {exc}", path=str(path)) from exc
    if data is None:
        return DEFAULT_CONFIG
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping", path=str(path))
    return apply_overrides(DEFAULT_CONFIG, data)


def apply_overrides(base: PipelineConfig, data: dict) -> PipelineConfig:
    updates: dict = {}
    for key, value in data.items():
        if key in _PATTERN_KEYS:
            if not isinstance(value, str):
                raise ConfigError(f"{key} must be a regex string", key=key)
            updates[key] = value
        elif key == "domain_markers":
            if not isinstance(value, dict):
                raise ConfigError("domain_markers must be a mapping", key=key)
            merged = dict(DEFAULT_DOMAIN_MARKERS)
            merged.update({k: str(v) for k, v in value.items()})
            updates[key] = merged
        elif key in _FLOAT_KEYS:
            try:
                updates[key] = float(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key} must be a number", key=key) from exc
        else:
            raise ConfigError(f"unknown config key {key!r}", key=key)
    config = replace(base, **updates)
    for name in _PATTERN_KEYS:
        config.compiled(name)
    for name in ("abstract", "references", "appendix"):
        config.compiled_marker(name)
    return config
