"""Text layout: positioned lines, words, and punctuation anchors.

All geometry lives in screen pixels.  Word metrics use a monospace
approximation (word width = character count x mean character width), so the
layout, simulator, and UI agree without real font shaping.  Every hit test
uses half-open intervals, which removes double-hit ambiguity at shared edges.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

SENTENCE_MARKS = (".", "!", "?")


class LayoutError(ValueError):
    """Raised when a document cannot be laid out with the given config."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with half-open containment: [x0,x1) x [y0,y1)."""

    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1


@dataclass(frozen=True)
class LayoutConfig:
    screen_width_px: int = 1920
    screen_height_px: int = 1080
    # 15.6" diagonal at 1920x1080 -> 141.2 PPI -> 55.6 px/cm.
    pixels_per_cm: float = 55.6
    line_spacing_mm: float = 4.5
    font_height_mm: float = 4.0
    mean_char_width_mm: float = 2.5
    paragraph_rect: Rect = field(
        default_factory=lambda: Rect(200.0, 80.0, 1720.0, 1000.0)
    )

    @property
    def px_per_mm(self) -> float:
        return self.pixels_per_cm / 10.0

    @property
    def char_width_px(self) -> float:
        return self.mean_char_width_mm * self.px_per_mm

    @property
    def font_height_px(self) -> float:
        return self.font_height_mm * self.px_per_mm

    @property
    def line_pitch_px(self) -> float:
        return (self.font_height_mm + self.line_spacing_mm) * self.px_per_mm

    def validate(self) -> None:
        if min(self.screen_width_px, self.screen_height_px) <= 0:
            raise LayoutError("screen dimensions must be positive")
        if self.pixels_per_cm <= 0 or self.mean_char_width_mm <= 0:
            raise LayoutError("pixel metrics must be positive")
        if self.font_height_mm <= 0 or self.line_spacing_mm < 0:
            raise LayoutError("font height must be positive, spacing non-negative")
        r = self.paragraph_rect
        if not (
            0 <= r.x0 < r.x1 <= self.screen_width_px
            and 0 <= r.y0 < r.y1 <= self.screen_height_px
        ):
            raise LayoutError("paragraph_rect must lie within the screen")


@dataclass(frozen=True)
class Word:
    index: int
    line_index: int
    box: Rect
    text: str


@dataclass(frozen=True)
class Line:
    index: int
    y_center_px: float
    x_left_px: float
    x_right_px: float
    word_range: tuple[int, int]  # [start, end)


@dataclass(frozen=True)
class SentenceSpan:
    word_range: tuple[int, int]  # [start, end)
    boxes: tuple[Rect, ...]  # one full-height line band segment per covered line


@dataclass(frozen=True)
class PunctuationAnchor:
    index: int
    mark: str
    x: float
    y: float
    word_index: int
    following_sentence: SentenceSpan


@dataclass(frozen=True)
class DocumentLayout:
    config: LayoutConfig
    source_text: str
    lines: tuple[Line, ...]
    words: tuple[Word, ...]
    anchors: tuple[PunctuationAnchor, ...]

    @property
    def pitch(self) -> float:
        return self.config.line_pitch_px

    @property
    def band_top(self) -> float:
        return self.lines[0].y_center_px - self.pitch / 2.0

    def line_band(self, index: int) -> tuple[float, float]:
        """Half-open vertical band [top, bottom) of a line."""
        top = self.band_top + index * self.pitch
        return top, top + self.pitch

    def sentence_text(self, span: SentenceSpan) -> str:
        start, end = span.word_range
        return " ".join(w.text for w in self.words[start:end])


def _sentence_boxes(
    layout_lines: list[Line],
    words: list[Word],
    start: int,
    end: int,
    band_top: float,
    pitch: float,
) -> tuple[Rect, ...]:
    boxes = []
    i = start
    while i < end:
        line_idx = words[i].line_index
        j = i
        while j + 1 < end and words[j + 1].line_index == line_idx:
            j += 1
        top = band_top + line_idx * pitch
        boxes.append(Rect(words[i].box.x0, top, words[j].box.x1, top + pitch))
        i = j + 1
    return tuple(boxes)


def layout_document(text: str, config: LayoutConfig | None = None) -> DocumentLayout:
    """Greedy word-wrap layout of plain text into the paragraph rectangle."""
    config = config or LayoutConfig()
    config.validate()
    tokens = text.split()
    if not tokens:
        raise LayoutError("text contains no whitespace-separated tokens")

    char_w = config.char_width_px
    pitch = config.line_pitch_px
    font_h = config.font_height_px
    para = config.paragraph_rect

    words: list[Word] = []
    lines: list[Line] = []
    x = para.x0
    line_start_word = 0

    def close_line() -> None:
        idx = len(lines)
        y_center = para.y0 + pitch / 2.0 + idx * pitch
        lines.append(
            Line(
                index=idx,
                y_center_px=y_center,
                x_left_px=para.x0,
                x_right_px=words[-1].box.x1,
                word_range=(line_start_word, len(words)),
            )
        )

    for tok in tokens:
        w_px = len(tok) * char_w
        if words and len(words) > line_start_word and x + w_px > para.x1:
            close_line()
            line_start_word = len(words)
            x = para.x0
        line_idx = len(lines)
        y_center = para.y0 + pitch / 2.0 + line_idx * pitch
        box = Rect(x, y_center - font_h / 2.0, x + w_px, y_center + font_h / 2.0)
        words.append(Word(index=len(words), line_index=line_idx, box=box, text=tok))
        x = box.x1 + char_w  # one character of inter-word gap
    close_line()

    if lines[-1].y_center_px + pitch / 2.0 > para.y1:
        raise LayoutError("text does not fit in paragraph_rect (single page only)")

    band_top = lines[0].y_center_px - pitch / 2.0

    # Punctuation anchors, in reading order: every '.', '!', '?' character.
    raw_anchors: list[tuple[str, float, float, int]] = []
    for word in words:
        for ci, ch in enumerate(word.text):
            if ch in SENTENCE_MARKS:
                ax = word.box.x0 + (ci + 0.5) * char_w
                ay = lines[word.line_index].y_center_px
                raw_anchors.append((ch, ax, ay, word.index))

    anchors: list[PunctuationAnchor] = []
    for ai, (mark, ax, ay, wi) in enumerate(raw_anchors):
        start = wi + 1
        if ai + 1 < len(raw_anchors):
            end = raw_anchors[ai + 1][3] + 1  # include the word carrying next mark
        else:
            end = len(words)
        start = min(start, len(words))
        end = max(end, start)
        span = SentenceSpan(
            word_range=(start, end),
            boxes=_sentence_boxes(lines, words, start, end, band_top, pitch),
        )
        anchors.append(
            PunctuationAnchor(
                index=ai, mark=mark, x=ax, y=ay, word_index=wi,
                following_sentence=span,
            )
        )

    return DocumentLayout(
        config=config,
        source_text=text,
        lines=tuple(lines),
        words=tuple(words),
        anchors=tuple(anchors),
    )


def line_at_y(layout: DocumentLayout, y_px: float) -> int | None:
    """Line whose half-open vertical band contains y_px, or None."""
    idx = math.floor((y_px - layout.band_top) / layout.pitch)
    if 0 <= idx < len(layout.lines):
        return idx
    return None


def nearest_line(layout: DocumentLayout, y_px: float) -> int:
    idx = math.floor((y_px - layout.band_top) / layout.pitch)
    return max(0, min(len(layout.lines) - 1, idx))


def word_at(layout: DocumentLayout, x: float, y: float) -> int | None:
    """Word whose (half-open) box contains the point, or None."""
    li = line_at_y(layout, y)
    if li is None:
        return None
    start, end = layout.lines[li].word_range
    for word in layout.words[start:end]:
        if word.box.contains(x, y):
            return word.index
    return None


def anchors_in_region(layout: DocumentLayout, region: list[Rect]) -> list[int]:
    """Anchor indices inside the union of rectangles, in document order."""
    hits = []
    for a in layout.anchors:
        if any(r.contains(a.x, a.y) for r in region):
            hits.append(a.index)
    return hits


def layout_export(layout: DocumentLayout) -> dict:
    """JSON-serializable layout export consumed by the UI and harness."""
    cfg = layout.config
    return {
        "config": {
            "screen_width_px": cfg.screen_width_px,
            "screen_height_px": cfg.screen_height_px,
            "pixels_per_cm": cfg.pixels_per_cm,
            "line_spacing_mm": cfg.line_spacing_mm,
            "font_height_mm": cfg.font_height_mm,
            "mean_char_width_mm": cfg.mean_char_width_mm,
            "paragraph_rect": [
                cfg.paragraph_rect.x0, cfg.paragraph_rect.y0,
                cfg.paragraph_rect.x1, cfg.paragraph_rect.y1,
            ],
        },
        "lines": [
            {
                "index": ln.index,
                "y_center": ln.y_center_px,
                "x_left": ln.x_left_px,
                "x_right": ln.x_right_px,
            }
            for ln in layout.lines
        ],
        "words": [
            {
                "index": w.index,
                "line": w.line_index,
                "box": [w.box.x0, w.box.y0, w.box.x1, w.box.y1],
                "text": w.text,
            }
            for w in layout.words
        ],
        "anchors": [
            {
                "index": a.index,
                "mark": a.mark,
                "x": a.x,
                "y": a.y,
                "sentence_word_range": list(a.following_sentence.word_range),
            }
            for a in layout.anchors
        ],
    }


def write_layout_export(layout: DocumentLayout, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(layout_export(layout), fh, indent=2, sort_keys=True)
