"""Exception hierarchy shared by all pipeline stages.

Every domain failure derives from :class:`TbrfError` so the CLI can map
them to exit code 1 with a machine-readable payload; anything else is a
genuine bug and escapes unchanged.
"""

from __future__ import annotations


class TbrfError(Exception):
    """Base class for all expected pipeline failures."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = {k: v for k, v in details.items() if v is not None}

    def to_json_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class SchemaError(TbrfError):
    """Block dump violates the JSON schema (missing field, wrong type)."""


class GeometryError(TbrfError):
    """A bounding box is malformed (inverted, non-finite, zero-area)."""


class DetectError(TbrfError):
    """A rule-based detection precondition failed (e.g. no References)."""


class EmptyDocumentError(TbrfError):
    """Document has no text block with spans; nothing to encode."""


class DegenerateBoundaryError(TbrfError):
    """A normalization denominator collapsed below epsilon with no fallback."""


class SingleClassError(TbrfError):
    """Training data contains fewer than two distinct labels."""


class NonFiniteFeatureError(TbrfError):
    """A feature vector contains NaN or infinity."""


class DimensionMismatchError(TbrfError):
    """Feature vector length does not match the trained model."""


class ClassTooSmallError(TbrfError):
    """A class is too small to receive rows on both sides of a split."""


class DatasetError(TbrfError):
    """Labeled dataset violates its invariants (duplicates, empty)."""


class KeyMismatchError(TbrfError):
    """Prediction and gold label maps cover different block sets."""


class CaptionNotOnPageError(TbrfError):
    """A caption block id does not exist on the page being merged."""


class ConfigError(TbrfError):
    """Configuration file is unreadable or contains invalid values."""


class IoError(TbrfError):
    """Reading or writing a pipeline artifact failed."""
