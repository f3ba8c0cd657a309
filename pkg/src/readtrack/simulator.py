"""Synthetic gaze-stream generator with ground-truth labels.

Reading kinematics follow fixation/saccade hops of 7-9 characters along the
laid-out words.  Scripted actions cover linear reading, jumps (300 ms
straight-line saccade to the target, then reading resumes), look-aways
(invalid samples), and dwells.  Observation noise is drawn per sample from
the error-vector model's generating Gaussian -- not from its 500-sample
cloud, so the scorer and the simulator are not trivially identical -- and a
time-linear drift offset is added on top.  Everything is deterministic for a
fixed script seed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errormodels import DriftModel, ErrorVectorModel, drift_offset
from .geometry import DocumentLayout
from .tracker import GazeSample

JUMP_TRANSIT_MS = 300.0


class InvalidScript(ValueError):
    """Scenario references words outside the document or is malformed."""


@dataclass(frozen=True)
class ReadLinear:
    from_word: int
    to_word: int
    wpm: float = 180.0


@dataclass(frozen=True)
class Jump:
    target_word: int


@dataclass(frozen=True)
class LookAway:
    duration_s: float


@dataclass(frozen=True)
class Dwell:
    duration_s: float


Action = ReadLinear | Jump | LookAway | Dwell


@dataclass(frozen=True)
class ScenarioScript:
    name: str
    document: str
    actions: tuple[Action, ...]
    seed: int
    sample_rate_hz: float = 60.0

    def __post_init__(self) -> None:
        if not self.actions:
            raise InvalidScript("script has no actions")
        if self.sample_rate_hz <= 0:
            raise InvalidScript("sample rate must be positive")


@dataclass(frozen=True)
class TruthEntry:
    t_ms: int
    word: int
    mode: str  # linear | jumping | away


@dataclass(frozen=True)
class GroundTruthTrace:
    samples: tuple[GazeSample, ...]
    truth: tuple[TruthEntry, ...]
    # per-sample true gaze points, for raw-error accounting
    true_points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class _Segment:
    duration_ms: float
    start: tuple[float, float]
    end: tuple[float, float]
    word: int
    mode: str


def _word_center(layout: DocumentLayout, wi: int) -> tuple[float, float]:
    box = layout.words[wi].box
    return (box.x0 + box.x1) / 2.0, (box.y0 + box.y1) / 2.0


def _fixation_segments(
    layout: DocumentLayout, action: ReadLinear, rng: np.random.Generator
) -> list[_Segment]:
    segments = []
    char_w = layout.config.char_width_px
    for wi in range(action.from_word, action.to_word + 1):
        word = layout.words[wi]
        n = len(word.text)
        word_ms = 60000.0 / action.wpm
        ci = 0
        runs = []
        while ci < n:
            stride = int(rng.integers(7, 10))
            runs.append((ci, min(n, ci + stride)))
            ci += stride
        for lo, hi in runs:
            x = word.box.x0 + (lo + hi) / 2.0 * char_w
            y = layout.lines[word.line_index].y_center_px
            dur = word_ms * (hi - lo) / n
            segments.append(_Segment(dur, (x, y), (x, y), wi, "linear"))
    return segments


def _build_segments(
    script: ScenarioScript, layout: DocumentLayout, rng: np.random.Generator
) -> list[_Segment]:
    n_words = len(layout.words)
    pos = _word_center(layout, 0)
    word = 0
    segments: list[_Segment] = []
    for action in script.actions:
        if isinstance(action, ReadLinear):
            if not (0 <= action.from_word <= action.to_word < n_words):
                raise InvalidScript(f"word range out of document: {action}")
            segs = _fixation_segments(layout, action, rng)
            segments.extend(segs)
            pos = segs[-1].end
            word = action.to_word
        elif isinstance(action, Jump):
            if not (0 <= action.target_word < n_words):
                raise InvalidScript(f"jump target out of document: {action}")
            target = _word_center(layout, action.target_word)
            segments.append(
                _Segment(JUMP_TRANSIT_MS, pos, target, action.target_word, "jumping")
            )
            pos = target
            word = action.target_word
        elif isinstance(action, LookAway):
            if action.duration_s <= 0:
                raise InvalidScript("LookAway duration must be positive")
            segments.append(
                _Segment(action.duration_s * 1000.0, pos, pos, word, "away")
            )
        elif isinstance(action, Dwell):
            if action.duration_s <= 0:
                raise InvalidScript("Dwell duration must be positive")
            segments.append(
                _Segment(action.duration_s * 1000.0, pos, pos, word, "linear")
            )
        else:  # pragma: no cover
            raise InvalidScript(f"unknown action: {action!r}")
    return segments


def simulate(
    script: ScenarioScript,
    layout: DocumentLayout,
    vec_model: ErrorVectorModel,
    drift: DriftModel | None = None,
) -> GroundTruthTrace:
    drift = drift or DriftModel.none()
    rng = np.random.default_rng(script.seed)
    segments = _build_segments(script, layout, rng)
    ppcm = layout.config.pixels_per_cm
    dt_ms = 1000.0 / script.sample_rate_hz

    samples: list[GazeSample] = []
    truth: list[TruthEntry] = []
    true_points: list[tuple[float, float]] = []

    # Timestamps come from a global sample index so that accumulated float
    # error cannot shift samples across segment boundaries: a 5 s look-away
    # at 60 Hz must contain exactly 300 samples.
    i = 0
    seg_start = 0.0
    for seg in segments:
        seg_end = seg_start + seg.duration_ms
        while (t := i * dt_ms) < seg_end:
            frac = (t - seg_start) / seg.duration_ms if seg.duration_ms > 0 else 0.0
            tx = seg.start[0] + (seg.end[0] - seg.start[0]) * frac
            ty = seg.start[1] + (seg.end[1] - seg.start[1]) * frac
            t_ms = int(round(t))
            valid = seg.mode != "away"
            if valid:
                nx = rng.normal(0.0, vec_model.sigma_h_cm) * ppcm
                ny = rng.normal(0.0, vec_model.sigma_v_cm) * ppcm
                ddx, ddy = drift_offset(drift, t / 1000.0)
                ox = tx + nx + ddx * ppcm
                oy = ty + ny + ddy * ppcm
            else:
                ox, oy = 0.0, 0.0
            samples.append(GazeSample(t_ms=t_ms, x=ox, y=oy, valid=valid))
            truth.append(TruthEntry(t_ms=t_ms, word=seg.word, mode=seg.mode))
            true_points.append((tx, ty))
            i += 1
        seg_start = seg_end

    if not samples:
        raise InvalidScript("script produced no samples")
    return GroundTruthTrace(
        samples=tuple(samples), truth=tuple(truth), true_points=tuple(true_points)
    )


# --- file formats -----------------------------------------------------------


def write_trace_csv(trace: GroundTruthTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_ms", "x_px", "y_px", "valid", "truth_word", "truth_mode"])
        for s, tr in zip(trace.samples, trace.truth):
            writer.writerow(
                [s.t_ms, f"{s.x:.8g}", f"{s.y:.8g}", int(s.valid), tr.word, tr.mode]
            )


def _action_to_dict(a: Action) -> dict:
    if isinstance(a, ReadLinear):
        return {"type": "read", "from_word": a.from_word, "to_word": a.to_word, "wpm": a.wpm}
    if isinstance(a, Jump):
        return {"type": "jump", "target_word": a.target_word}
    if isinstance(a, LookAway):
        return {"type": "look_away", "duration_s": a.duration_s}
    return {"type": "dwell", "duration_s": a.duration_s}


def _action_from_dict(d: dict) -> Action:
    kind = d.get("type")
    if kind == "read":
        return ReadLinear(d["from_word"], d["to_word"], d.get("wpm", 180.0))
    if kind == "jump":
        return Jump(d["target_word"])
    if kind == "look_away":
        return LookAway(d["duration_s"])
    if kind == "dwell":
        return Dwell(d["duration_s"])
    raise InvalidScript(f"unknown action type: {kind!r}")


def write_script_json(script: ScenarioScript, path: str) -> None:
    doc = {
        "name": script.name,
        "document": script.document,
        "seed": script.seed,
        "sample_rate_hz": script.sample_rate_hz,
        "actions": [_action_to_dict(a) for a in script.actions],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)


def read_script_json(path: str) -> ScenarioScript:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return ScenarioScript(
        name=doc["name"],
        document=doc["document"],
        actions=tuple(_action_from_dict(a) for a in doc["actions"]),
        seed=doc["seed"],
        sample_rate_hz=doc.get("sample_rate_hz", 60.0),
    )
