import logging

import pytest

from tbrf.blocks import ZoneKind
from tbrf.config import DEFAULT_CONFIG, apply_overrides
from tbrf.errors import DetectError
from tbrf.rules import (
    SectionLevel,
    find_captions,
    match_caption,
    match_section_title,
    scan_section_titles,
    segment_domains,
)

from conftest import make_block, make_doc, make_page


class TestCaptionRegexes:
    @pytest.mark.parametrize(
        "text,kind,number",
        [
            ("Figure 3: margins", ZoneKind.FIGURE, 3),
            ("Figure 12. margins", ZoneKind.FIGURE, 12),
            ("Fig. 4: detail", ZoneKind.FIGURE, 4),
            ("Fig 7. detail", ZoneKind.FIGURE, 7),
            ("Table 2: results", ZoneKind.TABLE, 2),
            ("Table 10. results", ZoneKind.TABLE, 10),
        ],
    )
    def test_matches(self, text, kind, number):
        block = make_block(0, (72, 72, 297, 84), text=text)
        match = match_caption(block, DEFAULT_CONFIG)
        assert match is not None
        assert match.kind is kind
        assert match.number == number
        assert match.caption_text == text

    @pytest.mark.parametrize(
        "text",
        [
            "figure 3: lowercase",
            "FIGURE 3: uppercase",
            "Figure 3 no punctuation",
            "Figure three: words",
            "See Figure 3: mid-sentence",
            "Tables 2: plural",
        ],
    )
    def test_non_matches(self, text):
        block = make_block(0, (72, 72, 297, 84), text=text)
        assert match_caption(block, DEFAULT_CONFIG) is None

    def test_duplicate_numbers_flagged(self, caplog):
        blocks = [
            make_block(0, (72, 72, 297, 84), text="Figure 1: first"),
            make_block(1, (72, 100, 297, 112), text="Figure 1: second"),
            make_block(2, (72, 130, 297, 142), text="Table 1: fine"),
        ]
        doc = make_doc([make_page(blocks)])
        with caplog.at_level(logging.WARNING):
            captions = find_captions(doc)
        flags = {c.block_id: c.duplicate for c in captions}
        assert flags == {0: False, 1: True, 2: False}

    def test_custom_pattern_via_config(self):
        config = apply_overrides(
            DEFAULT_CONFIG, {"caption_figure": r"^Abb\.\s*(?P<num>\d+)\s*[:.]"}
        )
        block = make_block(0, (72, 72, 297, 84), text="Abb. 5: Beispiel")
        match = match_caption(block, config)
        assert match is not None and match.number == 5
        assert match_caption(make_block(1, (72, 90, 297, 102), text="Figure 5: x"), config) is None


class TestSectionTitles:
    def test_main_and_sub(self):
        main = make_block(0, (72, 72, 200, 86), text="3 Results", font="SansBold", size=12.0)
        sub = make_block(1, (72, 100, 200, 114), text="3.1 Setup", font="SansBold", size=12.0)
        deep = make_block(2, (72, 130, 200, 144), text="3.1.2 Corner", font="SansBold", size=12.0)
        assert match_section_title(main, "SerifBody").level is SectionLevel.MAIN
        assert match_section_title(sub, "SerifBody").level is SectionLevel.SUB
        assert match_section_title(deep, "SerifBody").level is SectionLevel.SUB

    def test_font_guard_blocks_body_font(self):
        block = make_block(0, (72, 72, 200, 86), text="3 Results", font="SerifBody")
        assert match_section_title(block, "SerifBody") is None

    def test_non_heading_text(self):
        block = make_block(0, (72, 72, 200, 86), text="Results 3", font="SansBold")
        assert match_section_title(block, "SerifBody") is None

    def test_scan_warns_on_regression(self, caplog):
        blocks = [
            make_block(0, (72, 72, 200, 86), text="2 Method", font="SansBold", size=12.0),
            make_block(1, (72, 300, 200, 314), text="1 Intro", font="SansBold", size=12.0),
            make_block(2, (72, 500, 297, 560), text="Body words. " * 10, font="SerifBody"),
        ]
        doc = make_doc([make_page(blocks)])
        with caplog.at_level(logging.WARNING):
            titles = scan_section_titles(doc)
        assert [t.number for t in titles] == ["2", "1"]
        assert any("breaks ordering" in r.message for r in caplog.records)


def _domain_doc(include_appendix=True, include_refs=True):
    y = 72
    blocks = []

    def add(text, font="SerifBody", size=10.0, h=14):
        nonlocal y
        blocks.append(
            make_block(len(blocks), (72, y, 297, y + h), text=text, font=font, size=size)
        )
        y += h + 10

    add("A short title line", font="SerifTitle", size=16.0)
    add("Abstract words about layout metrics and margins.")
    add("1 Introduction", font="SansBold", size=12.0)
    add("Body paragraph one with plain words.")
    add("A sentence starting with the letter A is not an appendix.")
    if include_refs:
        add("References", font="SansBold", size=12.0)
        add("[1] Some entry words.")
    if include_appendix:
        add("Appendix A. Extra", font="SansBold", size=12.0)
        add("Closing appendix words.")
    return make_doc([make_page(blocks)])


class TestDomains:
    def test_segments_partition_document(self):
        doc = _domain_doc()
        seg = segment_domains(doc)
        all_ids = sorted(b.block_id for b in doc.iter_blocks())
        combined = sorted([*seg.basic_info, *seg.body, *seg.references, *seg.appendix])
        assert combined == all_ids

    def test_boundaries(self):
        doc = _domain_doc()
        seg = segment_domains(doc)
        assert seg.basic_info == (0, 1)
        assert seg.body_start_id == 2
        assert seg.references_id == 5
        assert seg.appendix_id == 7
        assert seg.body == (2, 3, 4)
        assert seg.references == (5, 6)
        assert seg.appendix == (7, 8)

    def test_appendix_marker_before_references_ignored(self):
        doc = _domain_doc()
        seg = segment_domains(doc)
        # block 4 starts with "A " but sits before References
        assert 4 in seg.body

    def test_missing_references_rejected(self):
        doc = _domain_doc(include_refs=False, include_appendix=False)
        with pytest.raises(DetectError):
            segment_domains(doc)

    def test_no_appendix_runs_references_to_end(self):
        doc = _domain_doc(include_appendix=False)
        seg = segment_domains(doc)
        assert seg.appendix == ()
        assert seg.references == (5, 6)

    def test_domain_of(self):
        doc = _domain_doc()
        seg = segment_domains(doc)
        assert seg.domain_of(0) == "basic_info"
        assert seg.domain_of(3) == "body"
        assert seg.domain_of(6) == "references"
        assert seg.domain_of(8) == "appendix"
