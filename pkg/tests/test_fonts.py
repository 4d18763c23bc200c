import logging

import pytest

from tbrf.blocks import SpanFontStats
from tbrf.errors import EmptyDocumentError
from tbrf.fonts import block_modal_font, block_modal_size, bucket_size, document_body_font

from conftest import make_block, make_doc, make_page


class TestBucketing:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            (10.0, 10.0),
            (9.96, 10.0),
            (9.94, 9.9),
            (9.95, 10.0),  # half rounds up
            (0.04, 0.0),
            (11.649999, 11.6),
        ],
    )
    def test_bucket_size(self, raw, expected):
        assert bucket_size(raw) == pytest.approx(expected)


class TestBlockModal:
    def test_char_weighted_font(self):
        spans = (
            SpanFontStats("Alpha", 10.0, 30),
            SpanFontStats("Beta", 10.0, 20),
            SpanFontStats("Alpha", 9.0, 5),
        )
        block = make_block(0, (0, 0, 10, 10), spans=spans)
        assert block_modal_font(block) == "Alpha"

    def test_font_tie_prefers_smaller_name(self):
        spans = (SpanFontStats("Zed", 10.0, 10), SpanFontStats("Abc", 9.0, 10))
        block = make_block(0, (0, 0, 10, 10), spans=spans)
        assert block_modal_font(block) == "Abc"

    def test_modal_size_is_bucketed_and_weighted(self):
        spans = (
            SpanFontStats("Alpha", 9.96, 40),  # buckets to 10.0
            SpanFontStats("Alpha", 10.01, 30),  # buckets to 10.0
            SpanFontStats("Alpha", 12.0, 50),
        )
        block = make_block(0, (0, 0, 10, 10), spans=spans)
        assert block_modal_size(block) == pytest.approx(10.0)

    def test_size_tie_prefers_smaller(self):
        spans = (SpanFontStats("Alpha", 12.0, 10), SpanFontStats("Alpha", 9.0, 10))
        block = make_block(0, (0, 0, 10, 10), spans=spans)
        assert block_modal_size(block) == pytest.approx(9.0)

    def test_no_spans_rejected(self):
        block = make_block(0, (0, 0, 10, 10), spans=())
        with pytest.raises(EmptyDocumentError):
            block_modal_font(block)


class TestBodyFont:
    def test_dominant_font_wins(self):
        blocks = [
            make_block(0, (72, 72, 297, 100), text="a" * 200, font="SerifBody", size=10.0),
            make_block(1, (72, 120, 297, 150), text="b" * 50, font="SansBold", size=12.0),
        ]
        doc = make_doc([make_page(blocks)])
        font, size = document_body_font(doc)
        assert font == "SerifBody"
        assert size == pytest.approx(10.0)

    def test_tie_prefers_lexicographically_smaller_with_warning(self, caplog):
        blocks = [
            make_block(0, (72, 72, 297, 100), text="a" * 50, font="Zeta", size=10.0),
            make_block(1, (72, 120, 297, 150), text="b" * 50, font="Alpha", size=11.0),
        ]
        doc = make_doc([make_page(blocks)])
        with caplog.at_level(logging.WARNING):
            font, size = document_body_font(doc)
        assert font == "Alpha"
        assert size == pytest.approx(11.0)
        assert any("tie" in r.message.lower() for r in caplog.records)

    def test_body_size_is_modal_over_body_font_spans_only(self):
        spans_a = (SpanFontStats("SerifBody", 10.0, 100), SpanFontStats("Huge", 30.0, 90))
        spans_b = (SpanFontStats("SerifBody", 9.0, 40),)
        blocks = [
            make_block(0, (72, 72, 297, 100), spans=spans_a),
            make_block(1, (72, 120, 297, 150), spans=spans_b),
        ]
        doc = make_doc([make_page(blocks)])
        font, size = document_body_font(doc)
        assert font == "SerifBody"
        assert size == pytest.approx(10.0)

    def test_body_size_tie_prefers_smaller(self):
        spans = (SpanFontStats("SerifBody", 10.0, 50), SpanFontStats("SerifBody", 9.0, 50))
        doc = make_doc([make_page([make_block(0, (72, 72, 297, 100), spans=spans)])])
        _, size = document_body_font(doc)
        assert size == pytest.approx(9.0)

    def test_empty_document_rejected(self):
        doc = make_doc([make_page([])])
        with pytest.raises(EmptyDocumentError):
            document_body_font(doc)
