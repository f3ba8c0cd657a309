"""Reading-progress state machine.

Consumes calibrated gaze samples and maintains the current line, the running
horizontal progress, and per-word read counts.  Line switches come from
Z-cut detection (right border zone, then left border zone).  Sustained
vertical escape from the current line's error range accumulates toward the
jump threshold; once a jump is confirmed the gaze trajectory is recorded
until the next Z-cut, at which point the elector relocates the reading
position onto a punctuation anchor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .calibration import CalibrationModel, DegenerateFit, GazeLinePair
from .election import Elector, ElectionResult, NoCandidates
from .errormodels import ErrorRangeModel, range_at
from .geometry import DocumentLayout, Line, line_at_y, nearest_line, word_at


class OutOfOrderSample(ValueError):
    """Sample timestamp went backwards within a stream."""


@dataclass(frozen=True)
class GazeSample:
    t_ms: int
    x: float
    y: float
    valid: bool = True


class Mode(str, enum.Enum):
    LINEAR = "LINEAR"
    JUMP_PENDING = "JUMP_PENDING"


class ZCutState(str, enum.Enum):
    IDLE = "IDLE"
    RIGHT_REACHED = "RIGHT_REACHED"


def detect_z_cut(
    state: ZCutState, x_px: float, line: Line, fraction: float
) -> tuple[ZCutState, bool]:
    """Advance the Z-cut detector for one sample.

    Fires exactly when x enters the left border zone while the right border
    zone has been reached; firing resets the detector.  There is no mid-line
    reset: once the right zone was reached the state persists.
    """
    width = line.x_right_px - line.x_left_px
    right_zone = line.x_right_px - fraction * width
    left_zone = line.x_left_px + fraction * width
    if state is ZCutState.RIGHT_REACHED and x_px <= left_zone:
        return ZCutState.IDLE, True
    if x_px >= right_zone:
        return ZCutState.RIGHT_REACHED, False
    return state, False


@dataclass(frozen=True)
class TrackerConfig:
    zcut_border_fraction: float = 0.20
    jump_threshold_ms: int = 2500
    pixels_per_cm: float = 55.6
    # Consecutive in-range samples required before the escape timer resets.
    # A single noisy in-range sample must not wipe accumulated escape time:
    # per-sample gaze noise routinely re-enters the range even during a
    # genuine jump, so the reset is debounced.
    inrange_reset_samples: int = 12

    def __post_init__(self) -> None:
        if not (0.0 < self.zcut_border_fraction < 0.5):
            raise ValueError("zcut_border_fraction must be in (0, 0.5)")
        if self.jump_threshold_ms <= 0:
            raise ValueError("jump_threshold_ms must be positive")


# --- events -----------------------------------------------------------------


@dataclass(frozen=True)
class TrackerEvent:
    t_ms: int

    def record(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class HighlightUpdate(TrackerEvent):
    words: tuple[tuple[int, int], ...]  # (word index, new count)

    def record(self) -> dict:
        return {
            "t_ms": self.t_ms,
            "type": "HighlightUpdate",
            "words": [{"index": i, "count": c} for i, c in self.words],
        }


@dataclass(frozen=True)
class LineSwitch(TrackerEvent):
    from_line: int
    to_line: int

    def record(self) -> dict:
        return {
            "t_ms": self.t_ms,
            "type": "LineSwitch",
            "from": self.from_line,
            "to": self.to_line,
        }


@dataclass(frozen=True)
class LineFinished(TrackerEvent):
    line: int
    mean_y_gaze: float

    def record(self) -> dict:
        return {
            "t_ms": self.t_ms,
            "type": "LineFinished",
            "line": self.line,
            "mean_y_gaze": self.mean_y_gaze,
        }


@dataclass(frozen=True)
class JumpDetected(TrackerEvent):
    def record(self) -> dict:
        return {"t_ms": self.t_ms, "type": "JumpDetected"}


@dataclass(frozen=True)
class RelocationApplied(TrackerEvent):
    anchor: int | None
    line: int
    word: int
    reason: str  # single-candidate | election | fallback | forced
    election: ElectionResult | None = None

    def record(self) -> dict:
        rec = {
            "t_ms": self.t_ms,
            "type": "RelocationApplied",
            "anchor": self.anchor,
            "line": self.line,
            "word": self.word,
            "reason": self.reason,
        }
        if self.election is not None:
            rec["candidates"] = [
                {
                    "anchor": c.anchor_index,
                    "ratio": c.match_ratio,
                    "bonus": c.llm_bonus,
                    "total": c.total,
                }
                for c in self.election.candidates
            ]
            rec["llm_choice"] = self.election.llm_choice_anchor
            rec["winner"] = self.election.winner_anchor
        return rec


# --- tracker ----------------------------------------------------------------


class Tracker:
    """Single-writer reading tracker over one document layout."""

    def __init__(
        self,
        layout: DocumentLayout,
        range_model: ErrorRangeModel,
        calibrator: CalibrationModel,
        elector: Elector | None,
        config: TrackerConfig | None = None,
    ):
        self.layout = layout
        self.range_model = range_model
        self.calibrator = calibrator
        self.elector = elector
        self.config = config or TrackerConfig()

        self.mode = Mode.LINEAR
        self.current_line = 0
        self.progress_x = layout.lines[0].x_left_px
        self.zcut = ZCutState.IDLE
        self.escape_ms_accum = 0.0
        self.trajectory: list[tuple[int, float, float]] = []
        self.read_counts: dict[int, int] = {}

        self._last_t: int | None = None
        self._jump_detect_t: int | None = None
        self._prev_valid_t: int | None = None
        self._prev_sample_valid = False
        self._inrange_streak = 0
        # Raw Y samples attributed to the current line. New samples land in
        # the pending buffer and are committed once the in-range debounce
        # confirms the reader is still on this line, so an unresolved escape
        # run (a jump not yet detected) never contaminates the line's mean.
        self._line_raw_ys: list[float] = []
        self._line_pending_ys: list[float] = []
        self._hl_ptr = 0  # next word to highlight on the current pass
        self.last_calibrated: tuple[float, float] | None = None
        self.force_relocation_count = 0
        self.election_scoring_seconds: list[float] = []

    # -- helpers --

    def _enter_line(self, line_index: int, progress_x: float, word_ptr: int) -> None:
        self.current_line = line_index
        line = self.layout.lines[line_index]
        self.progress_x = min(max(progress_x, line.x_left_px), line.x_right_px)
        self._hl_ptr = word_ptr
        self._line_raw_ys = []
        self._line_pending_ys = []
        self.zcut = ZCutState.IDLE
        self.escape_ms_accum = 0.0
        self._inrange_streak = 0
        self.trajectory = []

    def _highlight_passed(self, t_ms: int) -> list[TrackerEvent]:
        line = self.layout.lines[self.current_line]
        newly = []
        end = line.word_range[1]
        while self._hl_ptr < end:
            word = self.layout.words[self._hl_ptr]
            if word.box.x1 > self.progress_x:
                break
            count = self.read_counts.get(word.index, 0) + 1
            self.read_counts[word.index] = count
            newly.append((word.index, count))
            self._hl_ptr += 1
        if newly:
            return [HighlightUpdate(t_ms=t_ms, words=tuple(newly))]
        return []

    def _finish_line(self, t_ms: int) -> list[TrackerEvent]:
        """Calibration pair from the just-finished line.

        Only committed samples count: the pending buffer may hold an
        unresolved escape run (a jump the timer has not yet confirmed), and
        pairing that gaze with this line's center would regress the
        calibration toward a line the reader never actually read. A line
        with no committed samples produces no pair and no refit.
        """
        events: list[TrackerEvent] = []
        if self._line_raw_ys:
            mean_y = sum(self._line_raw_ys) / len(self._line_raw_ys)
            line = self.layout.lines[self.current_line]
            self.calibrator.record_pair(GazeLinePair(mean_y, line.y_center_px))
            if len(self.calibrator.pairs) >= 2:
                try:
                    self.calibrator.fit()
                except DegenerateFit:
                    pass  # previous model retained
            events.append(
                LineFinished(t_ms=t_ms, line=self.current_line, mean_y_gaze=mean_y)
            )
        return events

    def _history_text(self) -> str:
        """Up to the last three completed sentences before the jump."""
        read = [i for i in self.read_counts if self.read_counts[i] > 0]
        last_read = max(read) if read else -1
        done = [a for a in self.layout.anchors if a.word_index <= last_read]
        if not done:
            n = min(len(self.layout.words), max(last_read + 1, 20))
            return " ".join(w.text for w in self.layout.words[:n])
        tail = done[-3:]
        if len(done) > 3:
            start = done[-4].word_index + 1
        else:
            start = 0
        end = tail[-1].word_index + 1
        return " ".join(w.text for w in self.layout.words[start:end])

    # -- operations --

    def ingest(self, sample: GazeSample) -> list[TrackerEvent]:
        if self._last_t is not None and sample.t_ms < self._last_t:
            raise OutOfOrderSample(
                f"sample at {sample.t_ms} ms after {self._last_t} ms"
            )
        self._last_t = sample.t_ms

        if not sample.valid:
            # Gaze not detected: every timer freezes, nothing is emitted.
            self._prev_sample_valid = False
            return []

        dt = 0.0
        if self._prev_sample_valid and self._prev_valid_t is not None:
            dt = float(sample.t_ms - self._prev_valid_t)
        self._prev_valid_t = sample.t_ms
        self._prev_sample_valid = True

        cal_x, cal_y = self.calibrator.apply(sample.x, sample.y)
        self.last_calibrated = (cal_x, cal_y)

        if self.mode is Mode.LINEAR:
            return self._ingest_linear(sample, cal_x, cal_y, dt)
        return self._ingest_jump_pending(sample, cal_x, cal_y)

    def _ingest_linear(
        self, sample: GazeSample, cal_x: float, cal_y: float, dt: float
    ) -> list[TrackerEvent]:
        events: list[TrackerEvent] = []
        line = self.layout.lines[self.current_line]
        _, v_range = range_at(
            self.range_model, cal_x, cal_y, self.config.pixels_per_cm
        )
        in_range = abs(cal_y - line.y_center_px) <= v_range

        # Every valid sample on this line feeds the calibration pair, escaped
        # or not.  Gating collection on the calibrated in-range test would
        # truncate the noise asymmetrically whenever the model itself is off,
        # dragging future pairs toward the current miscalibration.  Samples
        # stay pending until the in-range debounce commits them below.
        self._line_pending_ys.append(sample.y)

        if in_range:
            self._inrange_streak += 1
            if self._inrange_streak >= self.config.inrange_reset_samples:
                self.escape_ms_accum = 0.0
                self.trajectory = []
                self._line_raw_ys.extend(self._line_pending_ys)
                self._line_pending_ys = []
            self.progress_x = min(
                max(self.progress_x, cal_x, line.x_left_px), line.x_right_px
            )
            events.extend(self._highlight_passed(sample.t_ms))
            self.zcut, fired = detect_z_cut(
                self.zcut, cal_x, line, self.config.zcut_border_fraction
            )
            if fired and self.current_line + 1 < len(self.layout.lines):
                events.append(
                    LineSwitch(
                        t_ms=sample.t_ms,
                        from_line=self.current_line,
                        to_line=self.current_line + 1,
                    )
                )
                events.extend(self._finish_line(sample.t_ms))
                nxt = self.layout.lines[self.current_line + 1]
                self._enter_line(
                    self.current_line + 1, nxt.x_left_px, nxt.word_range[0]
                )
        else:
            self._inrange_streak = 0
            self.escape_ms_accum += dt
            # Escaped samples are kept: if this turns out to be a jump, the
            # points gathered while the timer ran cover the landing area,
            # which is where the relocation anchor lives.
            self.trajectory.append((sample.t_ms, cal_x, cal_y))
            if self.escape_ms_accum >= self.config.jump_threshold_ms:
                self.mode = Mode.JUMP_PENDING
                self.escape_ms_accum = 0.0
                self._jump_detect_t = sample.t_ms
                # The terminating Z-cut must be a fresh right-then-left
                # pattern performed after the jump landed.
                self.zcut = ZCutState.IDLE
                events.append(JumpDetected(t_ms=sample.t_ms))
        return events

    def _ingest_jump_pending(
        self, sample: GazeSample, cal_x: float, cal_y: float
    ) -> list[TrackerEvent]:
        events: list[TrackerEvent] = []
        self.trajectory.append((sample.t_ms, cal_x, cal_y))
        li = line_at_y(self.layout, cal_y)
        if li is None:
            li = nearest_line(self.layout, cal_y)
        zone_line = self.layout.lines[li]
        self.zcut, fired = detect_z_cut(
            self.zcut, cal_x, zone_line, self.config.zcut_border_fraction
        )
        if fired:
            events.extend(self._relocate_after_zcut(sample.t_ms))
        return events

    def _relocate_after_zcut(self, t_ms: int) -> list[TrackerEvent]:
        result: ElectionResult | None = None
        try:
            if self.elector is None:
                raise NoCandidates("no elector configured")
            result = self.elector.run(
                self.trajectory, self._history_text(), self._jump_detect_t
            )
            self.election_scoring_seconds.append(result.scoring_seconds)
            anchor = self.layout.anchors[result.winner_anchor]
            start, end = anchor.following_sentence.word_range
            word_index = start if start < len(self.layout.words) else anchor.word_index
            reason = result.reason
            anchor_index = anchor.index
        except NoCandidates:
            # Low-confidence fallback: the line nearest the trajectory's end.
            li = nearest_line(self.layout, self.trajectory[-1][2])
            word_index = self.layout.lines[li].word_range[0]
            reason = "fallback"
            anchor_index = None

        word = self.layout.words[word_index]
        self.mode = Mode.LINEAR
        self.trajectory = []
        self._enter_line(word.line_index, word.box.x0, word.index)
        return [
            RelocationApplied(
                t_ms=t_ms,
                anchor=anchor_index,
                line=word.line_index,
                word=word.index,
                reason=reason,
                election=result,
            )
        ]

    def force_relocate(self, t_ms: int, x: float, y: float) -> tuple[list[TrackerEvent], bool]:
        """Double-click override.  Returns (events, confirm)."""
        wi = word_at(self.layout, x, y)
        if wi is None:
            return [], False  # invalid blank area: no state change, no beep
        word = self.layout.words[wi]
        self.mode = Mode.LINEAR
        self.trajectory = []
        self.calibrator.reset()  # manual relocation signals tracker distrust
        self._enter_line(word.line_index, word.box.x0, word.index)
        self.force_relocation_count += 1
        return (
            [
                RelocationApplied(
                    t_ms=t_ms,
                    anchor=None,
                    line=word.line_index,
                    word=word.index,
                    reason="forced",
                )
            ],
            True,
        )
