import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbrf.blocks import BlockKind
from tbrf.errors import GeometryError, SchemaError
from tbrf.ingest import (
    assign_reading_order,
    column_of,
    document_to_json_dict,
    is_single_column,
    parse_block_dump,
    reading_sequence,
    serialize_document,
)

from conftest import make_block, make_doc, make_page


def minimal_dump(**overrides):
    dump = {
        "doc_id": "d1",
        "pages": [
            {
                "page_index": 0,
                "width": 612.0,
                "height": 792.0,
                "blocks": [
                    {
                        "block_id": 0,
                        "kind": "text",
                        "bbox": [72.0, 72.0, 297.0, 100.0],
                        "text": "Hello block",
                        "spans": [{"font": "SerifBody", "size": 10.0, "chars": 11}],
                    }
                ],
            }
        ],
    }
    dump.update(overrides)
    return dump


class TestParsing:
    def test_minimal_dump(self):
        doc = parse_block_dump(json.dumps(minimal_dump()))
        assert doc.doc_id == "d1"
        assert doc.block_count() == 1
        block = doc.block_by_id(0)
        assert block.kind is BlockKind.TEXT
        assert block.spans[0].font_name == "SerifBody"

    def test_bytes_input(self):
        doc = parse_block_dump(json.dumps(minimal_dump()).encode())
        assert doc.doc_id == "d1"

    def test_invalid_json(self):
        with pytest.raises(SchemaError):
            parse_block_dump("{nope")

    def test_missing_doc_id(self):
        dump = minimal_dump()
        del dump["doc_id"]
        with pytest.raises(SchemaError, match="doc_id"):
            parse_block_dump(json.dumps(dump))

    def test_duplicate_block_ids(self):
        dump = minimal_dump()
        blk = dump["pages"][0]["blocks"][0]
        dump["pages"][0]["blocks"].append(dict(blk))
        with pytest.raises(SchemaError, match="block_id"):
            parse_block_dump(json.dumps(dump))

    def test_duplicate_page_index(self):
        dump = minimal_dump()
        dump["pages"].append(dict(dump["pages"][0], blocks=[]))
        with pytest.raises(SchemaError, match="page_index"):
            parse_block_dump(json.dumps(dump))

    def test_inverted_bbox(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0]["bbox"] = [297.0, 72.0, 72.0, 100.0]
        with pytest.raises(GeometryError):
            parse_block_dump(json.dumps(dump))

    def test_nonfinite_bbox(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0]["bbox"] = [72.0, 72.0, float("inf"), 100.0]
        with pytest.raises(GeometryError):
            parse_block_dump(json.dumps(dump))

    def test_small_negative_coordinates_clamped(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0]["bbox"] = [-2.0, 72.0, 297.0, 100.0]
        doc = parse_block_dump(json.dumps(dump))
        assert doc.block_by_id(0).bbox.x0 == 0.0

    def test_large_negative_coordinates_rejected(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0]["bbox"] = [-50.0, 72.0, 297.0, 100.0]
        with pytest.raises(GeometryError):
            parse_block_dump(json.dumps(dump))

    def test_empty_text_block_dropped(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0]["text"] = "   "
        doc = parse_block_dump(json.dumps(dump))
        assert doc.block_count() == 0

    def test_image_block_with_spans_rejected(self):
        dump = minimal_dump()
        blk = dump["pages"][0]["blocks"][0]
        blk["kind"] = "image"
        blk["text"] = ""
        with pytest.raises(SchemaError):
            parse_block_dump(json.dumps(dump))

    def test_image_block_ok(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0] = {
            "block_id": 0,
            "kind": "image",
            "bbox": [72.0, 72.0, 297.0, 200.0],
            "text": "",
            "spans": [],
        }
        doc = parse_block_dump(json.dumps(dump))
        assert doc.block_by_id(0).kind is BlockKind.IMAGE

    def test_bool_is_not_an_id(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0]["block_id"] = True
        with pytest.raises(SchemaError):
            parse_block_dump(json.dumps(dump))

    def test_zero_char_spans_skipped(self):
        dump = minimal_dump()
        dump["pages"][0]["blocks"][0]["spans"] = [
            {"font": "SerifBody", "size": 10.0, "chars": 11},
            {"font": "Ghost", "size": 9.0, "chars": 0},
        ]
        doc = parse_block_dump(json.dumps(dump))
        assert len(doc.block_by_id(0).spans) == 1


class TestColumns:
    def test_single_column_heuristic(self):
        # most blocks wider than 60% of the page -> single column
        wide = [make_block(i, (36, 72 + 40 * i, 520, 100 + 40 * i)) for i in range(5)]
        page = make_page(wide)
        assert is_single_column(page)

    def test_two_column_heuristic(self):
        narrow = [make_block(i, (72, 72 + 40 * i, 297, 100 + 40 * i)) for i in range(5)]
        page = make_page(narrow)
        assert not is_single_column(page)

    def test_column_of_midline(self):
        left = make_block(0, (72, 72, 297, 100))
        right = make_block(1, (315, 72, 540, 100))
        page = make_page([left, right])
        assert column_of(left, page) == 0
        assert column_of(right, page) == 1

    def test_single_column_page_has_one_column(self):
        wide = [make_block(i, (36, 72 + 40 * i, 520, 100 + 40 * i)) for i in range(5)]
        page = make_page(wide)
        assert all(column_of(b, page) == 0 for b in wide)


class TestReadingOrder:
    def test_left_column_precedes_right(self):
        blocks = [
            make_block(0, (315, 72, 540, 100)),
            make_block(1, (72, 72, 297, 100)),
            make_block(2, (72, 120, 297, 150)),
            make_block(3, (315, 120, 540, 150)),
        ]
        doc = make_doc([make_page(blocks)])
        seq = [b.block_id for b in reading_sequence(doc)]
        assert seq == [1, 2, 0, 3]
        left = [seq.index(i) for i in (1, 2)]
        right = [seq.index(i) for i in (0, 3)]
        assert max(left) < min(right)

    def test_orders_are_dense_per_page(self):
        blocks = [make_block(i, (72, 72 + 30 * i, 297, 90 + 30 * i)) for i in range(4)]
        doc = make_doc([make_page(blocks)])
        orders = sorted(b.reading_order for b in doc.pages[0].blocks)
        assert orders == [0, 1, 2, 3]

    def test_idempotent(self):
        blocks = [
            make_block(0, (315, 72, 540, 100)),
            make_block(1, (72, 72, 297, 100)),
        ]
        doc = make_doc([make_page(blocks)])
        again = assign_reading_order(doc)
        assert [b.block_id for b in reading_sequence(again)] == [
            b.block_id for b in reading_sequence(doc)
        ]

    def test_tie_breaks_by_x_then_id(self):
        a = make_block(4, (80, 72, 120, 90))
        b = make_block(2, (72, 72, 110, 90))
        doc = make_doc([make_page([a, b])])
        assert [blk.block_id for blk in reading_sequence(doc)] == [2, 4]

    @given(
        st.lists(
            st.tuples(
                st.floats(0, 500, allow_nan=False),
                st.floats(0, 700, allow_nan=False),
            ),
            min_size=1,
            max_size=30,
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_reading_order_is_permutation(self, corners):
        blocks = [
            make_block(i, (x, y, x + 40.0, y + 12.0)) for i, (x, y) in enumerate(corners)
        ]
        doc = make_doc([make_page(blocks)])
        orders = sorted(b.reading_order for b in doc.pages[0].blocks)
        assert orders == list(range(len(blocks)))


class TestSerialization:
    def test_round_trip(self):
        blocks = [
            make_block(0, (315, 72, 540, 100)),
            make_block(1, (72, 72, 297, 100)),
        ]
        doc = make_doc([make_page(blocks)])
        text = serialize_document(doc)
        back = parse_block_dump(text)
        assert serialize_document(back) == text
        assert document_to_json_dict(back) == document_to_json_dict(doc)

    def test_reading_order_preserved(self):
        blocks = [make_block(0, (72, 72, 297, 100))]
        doc = make_doc([make_page(blocks)])
        payload = document_to_json_dict(doc)
        assert payload["pages"][0]["blocks"][0]["reading_order"] == 0


class TestFixture:
    def test_synth_2col_shape(self, fixtures_dir):
        doc = parse_block_dump((fixtures_dir / "synth_2col.json").read_text())
        assert doc.block_count() == 14
        ids = [b.block_id for b in doc.iter_blocks()]
        assert ids == sorted(ids)

    def test_synth_2col_reading_order(self, fixtures_dir):
        doc = parse_block_dump((fixtures_dir / "synth_2col.json").read_text())
        doc = assign_reading_order(doc)
        page = doc.pages[0]
        seq = sorted(page.blocks, key=lambda b: b.reading_order)
        cols = [column_of(b, page) for b in seq]
        # every left-column position precedes every right-column position
        assert cols == sorted(cols)
