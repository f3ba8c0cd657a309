import json

import pytest

from readtrack.geometry import (
    LayoutConfig,
    LayoutError,
    Rect,
    anchors_in_region,
    layout_document,
    layout_export,
    line_at_y,
    nearest_line,
    word_at,
    write_layout_export,
)
from readtrack.scenarios import TEXT_A


def test_two_sentence_minimal_layout():
    layout = layout_document("Hi. Bye.")
    assert len(layout.lines) == 1
    assert len(layout.words) == 2
    assert len(layout.anchors) == 2
    a0 = layout.anchors[0]
    assert a0.mark == "."
    start, end = a0.following_sentence.word_range
    assert [w.text for w in layout.words[start:end]] == ["Bye."]


def test_empty_text_rejected():
    with pytest.raises(LayoutError):
        layout_document("   ")


def greedy_wrap_line_count(token_lengths, config):
    """Independent greedy-wrap oracle over the token length sequence."""
    char_w = config.char_width_px
    width = config.paragraph_rect.x1 - config.paragraph_rect.x0
    lines = 1
    x = 0.0
    for n in token_lengths:
        w = n * char_w
        if x > 0.0 and x + w > width:
            lines += 1
            x = 0.0
        x += w + char_w
    return lines


def test_wrap_matches_independent_oracle(layout_a):
    cfg = layout_a.config
    lengths = [len(t) for t in TEXT_A.split()]
    assert len(layout_a.lines) == greedy_wrap_line_count(lengths, cfg)
    # every word sits within its line's horizontal extent
    for w in layout_a.words:
        line = layout_a.lines[w.line_index]
        assert line.x_left_px <= w.box.x0
        assert w.box.x1 <= line.x_right_px + 1e-9


def test_tokens_round_trip(layout_a):
    assert [w.text for w in layout_a.words] == TEXT_A.split()


def test_line_centers_strictly_increasing(layout_a):
    centers = [ln.y_center_px for ln in layout_a.lines]
    assert all(a < b for a, b in zip(centers, centers[1:]))


def test_line_at_y_center_and_outside(layout_a):
    for ln in layout_a.lines:
        assert line_at_y(layout_a, ln.y_center_px) == ln.index
    assert line_at_y(layout_a, layout_a.band_top - 1.0) is None
    below = layout_a.lines[-1].y_center_px + layout_a.pitch
    assert line_at_y(layout_a, below) is None


def test_line_at_y_half_open_boundary(layout_a):
    # the boundary between bands of lines 2 and 3 belongs to line 3
    top3, _ = layout_a.line_band(3)
    assert line_at_y(layout_a, top3) == 3


def test_nearest_line_clamps(layout_a):
    assert nearest_line(layout_a, -1e6) == 0
    assert nearest_line(layout_a, 1e6) == len(layout_a.lines) - 1


def test_word_at_center_gap_and_edge(layout_a):
    w5 = layout_a.words[5]
    cx = (w5.box.x0 + w5.box.x1) / 2.0
    cy = (w5.box.y0 + w5.box.y1) / 2.0
    assert word_at(layout_a, cx, cy) == 5
    # inter-word gap is one character wide
    gap_x = w5.box.x1 + layout_a.config.char_width_px / 2.0
    assert word_at(layout_a, gap_x, cy) is None
    # right edge is exclusive: never word 5
    assert word_at(layout_a, w5.box.x1, cy) != 5


def test_rect_half_open_contains():
    r = Rect(0.0, 0.0, 10.0, 10.0)
    assert r.contains(0.0, 0.0)
    assert not r.contains(10.0, 5.0)
    assert not r.contains(5.0, 10.0)


def test_anchors_in_region_whole_and_empty(layout_a):
    cfg = layout_a.config
    whole = [Rect(0, 0, cfg.screen_width_px, cfg.screen_height_px)]
    assert anchors_in_region(layout_a, whole) == [a.index for a in layout_a.anchors]
    assert anchors_in_region(layout_a, []) == []


def test_anchors_in_region_matches_brute_force(layout_a):
    top4, _ = layout_a.line_band(4)
    _, bot5 = layout_a.line_band(5)
    region = [Rect(0, top4, layout_a.config.screen_width_px, bot5)]
    got = anchors_in_region(layout_a, region)
    expected = [
        a.index
        for a in layout_a.anchors
        if any(r.contains(a.x, a.y) for r in region)
    ]
    assert got == expected
    assert got == sorted(got)


def test_text_too_tall_rejected():
    cfg = LayoutConfig(paragraph_rect=Rect(200.0, 80.0, 1720.0, 120.0))
    with pytest.raises(LayoutError):
        layout_document(TEXT_A, cfg)


def test_sentence_boxes_cover_word_range(layout_a):
    for a in layout_a.anchors:
        start, end = a.following_sentence.word_range
        for w in layout_a.words[start:end]:
            cx = (w.box.x0 + w.box.x1) / 2.0
            cy = layout_a.lines[w.line_index].y_center_px
            assert any(
                b.contains(cx, cy) for b in a.following_sentence.boxes
            ), f"word {w.index} not covered by sentence boxes of anchor {a.index}"


def test_layout_export_round_trip(tmp_path, layout_a):
    doc = layout_export(layout_a)
    assert set(doc) == {"config", "lines", "words", "anchors"}
    assert len(doc["words"]) == len(layout_a.words)
    assert doc["anchors"][0]["mark"] in (".", "!", "?")
    path = tmp_path / "layout.json"
    write_layout_export(layout_a, str(path))
    loaded = json.loads(path.read_text())
    assert loaded == json.loads(json.dumps(doc))
