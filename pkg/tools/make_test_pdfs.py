"""Generate the extractor's PDF fixtures with reportlab.

Each born-digital fixture gets a .expected.json sidecar recording the
page geometry and every text string drawn, so the extractor tests can
check schema conformance and word-level text loss against what actually
went into the file. Two extra fixtures exercise the error paths: an
encrypted file and an image-only page with no text layer.

Deterministic: fixed metadata, fixed timestamps, no randomness.
"""

from __future__ import annotations

import json
import zlib
from pathlib import Path

from reportlab.lib.pagesizes import letter
from reportlab.lib.utils import ImageReader
from reportlab.pdfbase.pdfmetrics import stringWidth
from reportlab.pdfgen import canvas

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "extractor" / "fixtures"

PAGE_W, PAGE_H = letter  # 612 x 792

LOREM = (
    "Layout streams keep the page order stable across columns and the "
    "margin codes stay fixed while glyph runs carry width signals that "
    "bound every trace panel inside the frame metric for the corpus"
).split()


def _canvas(path: Path, **kwargs) -> canvas.Canvas:
    c = canvas.Canvas(str(path), pagesize=letter, invariant=1, **kwargs)
    c.setAuthor("fixtures")
    c.setTitle(path.stem)
    return c


def _wrap(words: list[str], font: str, size: float, max_width: float) -> list[str]:
    lines, current = [], ""
    for word in words:
        trial = f"{current} {word}".strip()
        if current and stringWidth(trial, font, size) > max_width:
            lines.append(current)
            current = word
        else:
            current = trial
    if current:
        lines.append(current)
    return lines


class Recorder:
    """Wraps a canvas and keeps every string it draws."""

    def __init__(self, c: canvas.Canvas):
        self.canvas = c
        self.strings: list[str] = []

    def text(self, x: float, y_top: float, text: str, font: str, size: float):
        # reportlab uses a bottom-left origin; fixtures are described
        # top-down, so flip here and nowhere else
        self.canvas.setFont(font, size)
        self.canvas.drawString(x, PAGE_H - y_top, text)
        self.strings.append(text)

    def paragraph(self, x, y_top, words, font, size, width, leading) -> float:
        """Draw wrapped lines; return the y_top just below the block."""
        for i, line in enumerate(_wrap(words, font, size, width)):
            self.text(x, y_top + i * leading, line, font, size)
        return y_top + len(_wrap(words, font, size, width)) * leading


def _png_bytes(width: int = 8, height: int = 8) -> bytes:
    """Tiny grayscale PNG without importing an image library."""

    def chunk(kind: bytes, payload: bytes) -> bytes:
        raw = kind + payload
        return (
            len(payload).to_bytes(4, "big")
            + raw
            + zlib.crc32(raw).to_bytes(4, "big")
        )

    header = width.to_bytes(4, "big") + height.to_bytes(4, "big") + bytes(
        [8, 0, 0, 0, 0]
    )
    rows = b"".join(
        b"\x00" + bytes(((x * 16 + y * 16) % 256 for x in range(width)))
        for y in range(height)
    )
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", header)
        + chunk(b"IDAT", zlib.compress(rows))
        + chunk(b"IEND", b"")
    )


def _sidecar(path: Path, rec: Recorder, pages: int, images: int = 0) -> None:
    path.with_suffix(".expected.json").write_text(
        json.dumps(
            {
                "page_count": pages,
                "page_width": PAGE_W,
                "page_height": PAGE_H,
                "image_blocks": images,
                "strings": rec.strings,
            },
            indent=2,
        )
        + "\n"
    )


def single_paragraph() -> None:
    path = OUT / "single_paragraph.pdf"
    c = _canvas(path)
    rec = Recorder(c)
    rec.paragraph(72, 100, LOREM, "Times-Roman", 10, 360, 12)
    c.showPage()
    c.save()
    _sidecar(path, rec, pages=1)


def two_column() -> None:
    path = OUT / "two_column.pdf"
    c = _canvas(path)
    rec = Recorder(c)
    rec.text(72, 60, "Stream margins and trace panels", "Helvetica-Bold", 16)
    # columns are 225 pt wide with an 18 pt gutter
    y = rec.paragraph(72, 110, LOREM, "Times-Roman", 10, 225, 12)
    rec.paragraph(72, y + 20, LOREM[:18], "Times-Roman", 10, 225, 12)
    y = rec.paragraph(315, 110, LOREM[5:] + LOREM[:5], "Times-Roman", 10, 225, 12)
    rec.text(315, y + 20, "Table 1: Width signals per panel.", "Helvetica-Oblique", 9)
    rec.text(300, 740, "1", "Helvetica", 8)
    c.showPage()
    c.save()
    _sidecar(path, rec, pages=1)


def multi_page() -> None:
    path = OUT / "multi_page.pdf"
    c = _canvas(path)
    rec = Recorder(c)
    for n in (1, 2, 3):
        rec.text(72, 72, f"{n} Section heading {n}", "Helvetica-Bold", 12)
        y = rec.paragraph(72, 100, LOREM, "Times-Roman", 10, 400, 12)
        rec.paragraph(72, y + 20, LOREM[10:], "Times-Roman", 10, 400, 12)
        c.showPage()
    c.save()
    _sidecar(path, rec, pages=3)


def mixed_fonts() -> None:
    path = OUT / "mixed_fonts.pdf"
    c = _canvas(path)
    rec = Recorder(c)
    # one visual line assembled from three differently-styled pieces
    x = 72.0
    for piece, font, size in (
        ("Inline code ", "Times-Roman", 10),
        ("span_weight(x)", "Courier", 9),
        (" ends the line.", "Times-Roman", 10),
    ):
        rec.text(x, 120, piece, font, size)
        x += stringWidth(piece, font, size)
    rec.paragraph(72, 150, LOREM[:14], "Times-Roman", 10, 400, 12)
    c.showPage()
    c.save()
    _sidecar(path, rec, pages=1)


def with_image() -> None:
    path = OUT / "with_image.pdf"
    c = _canvas(path)
    rec = Recorder(c)
    y = rec.paragraph(72, 90, LOREM[:16], "Times-Roman", 10, 430, 12)
    img = ImageReader(__import__("io").BytesIO(_png_bytes()))
    # image frame in top-down terms: x 72..272, y 160..310
    c.drawImage(img, 72, PAGE_H - 310, width=200, height=150)
    rec.text(72, 330, "Figure 1: Glyph grid inside the frame.", "Helvetica-Oblique", 9)
    rec.paragraph(72, 360, LOREM[16:], "Times-Roman", 10, 430, 12)
    c.showPage()
    c.save()
    _sidecar(path, rec, pages=1, images=1)


def encrypted() -> None:
    path = OUT / "encrypted.pdf"
    c = _canvas(path, encrypt="owl-box-silver")
    rec = Recorder(c)
    rec.paragraph(72, 100, LOREM[:12], "Times-Roman", 10, 360, 12)
    c.showPage()
    c.save()


def image_only() -> None:
    path = OUT / "image_only.pdf"
    c = _canvas(path)
    img = ImageReader(__import__("io").BytesIO(_png_bytes()))
    c.drawImage(img, 100, 200, width=400, height=400)
    c.showPage()
    c.save()


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    single_paragraph()
    two_column()
    multi_page()
    mixed_fonts()
    with_image()
    encrypted()
    image_only()
    for p in sorted(OUT.iterdir()):
        print(f"wrote {p.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
