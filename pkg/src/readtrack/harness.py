"""Experiment runner: scenario suites through the full pipeline, plus metrics.

Metrics mirror the controlled-experiment protocol: word-tracking error during
linear reading (zero when the tracked word matches ground truth, else
word-center distance), per-candidate-count relocation accuracy (a relocation
is correct when the elected line matches the reader's true line at jump
detection time), a vertical-error timeline for the calibration ablation, and
wall-clock latency budgets.

Wall-clock latency is reported in a separate file (latency.json); metrics.json
contains only deterministic quantities so identical seeded runs are
byte-identical.
"""

from __future__ import annotations

import bisect
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .calibration import CalibrationModel
from .election import Elector
from .errormodels import DriftModel, ErrorRangeModel, ErrorVectorModel
from .geometry import DocumentLayout, LayoutConfig, layout_document
from .simulator import GroundTruthTrace, ScenarioScript, simulate
from .tracker import (
    GazeSample,
    JumpDetected,
    RelocationApplied,
    Tracker,
    TrackerConfig,
)

Y_BIN_S = 5.0


class FrozenCalibration(CalibrationModel):
    """Calibration disabled: identity map, pairs discarded (ablation arm)."""

    def record_pair(self, pair) -> None:  # noqa: D102
        pass


@dataclass
class SampleRecord:
    t_ms: int
    valid: bool
    truth_word: int
    truth_mode: str
    tracker_line: int
    cal_x: float
    cal_y: float
    tracked_word: int


@dataclass
class ScenarioRun:
    script: ScenarioScript
    layout: DocumentLayout
    trace: GroundTruthTrace
    events: list
    samples: list[SampleRecord]
    ingest_seconds: list[float]
    election_scoring_seconds: list[float]
    force_relocation_count: int


def tracked_word_at(layout: DocumentLayout, line_index: int, x: float) -> int:
    """Current word per horizontal progress: the word under x on the line."""
    line = layout.lines[line_index]
    start, end = line.word_range
    x = min(max(x, line.x_left_px), line.x_right_px - 1e-9)
    best = start
    for wi in range(start, end):
        if layout.words[wi].box.x0 <= x:
            best = wi
        else:
            break
    return best


def run_scenario(
    script: ScenarioScript,
    layout: DocumentLayout,
    range_model: ErrorRangeModel,
    vec_model: ErrorVectorModel,
    drift: DriftModel | None,
    provider,
    calibration_on: bool = True,
    tracker_config: TrackerConfig | None = None,
) -> ScenarioRun:
    trace = simulate(script, layout, vec_model, drift)
    calibrator = CalibrationModel() if calibration_on else FrozenCalibration()
    ppcm = layout.config.pixels_per_cm
    elector = Elector(layout, range_model, vec_model, ppcm, provider)
    cfg = tracker_config or TrackerConfig(pixels_per_cm=ppcm)
    tracker = Tracker(layout, range_model, calibrator, elector, cfg)

    events = []
    samples: list[SampleRecord] = []
    ingest_seconds: list[float] = []
    for s, tr in zip(trace.samples, trace.truth):
        t0 = time.perf_counter()
        evs = tracker.ingest(s)
        ingest_seconds.append(time.perf_counter() - t0)
        events.extend(evs)
        if s.valid and tracker.last_calibrated is not None:
            cal_x, cal_y = tracker.last_calibrated
        else:
            cal_x, cal_y = s.x, s.y
        samples.append(
            SampleRecord(
                t_ms=s.t_ms,
                valid=s.valid,
                truth_word=tr.word,
                truth_mode=tr.mode,
                tracker_line=tracker.current_line,
                cal_x=cal_x,
                cal_y=cal_y,
                tracked_word=tracked_word_at(layout, tracker.current_line, cal_x),
            )
        )
    return ScenarioRun(
        script=script,
        layout=layout,
        trace=trace,
        events=events,
        samples=samples,
        ingest_seconds=ingest_seconds,
        election_scoring_seconds=list(tracker.election_scoring_seconds),
        force_relocation_count=tracker.force_relocation_count,
    )


# --- metric computation -----------------------------------------------------


def word_center_distance_cm(layout: DocumentLayout, a: int, b: int) -> float:
    wa, wb = layout.words[a].box, layout.words[b].box
    ax, ay = (wa.x0 + wa.x1) / 2.0, (wa.y0 + wa.y1) / 2.0
    bx, by = (wb.x0 + wb.x1) / 2.0, (wb.y0 + wb.y1) / 2.0
    return float(np.hypot(ax - bx, ay - by)) / layout.config.pixels_per_cm


def linear_errors_cm(run: ScenarioRun) -> list[float]:
    """Word-tracking error at each valid linear-reading timestamp."""
    out = []
    for rec in run.samples:
        if not rec.valid or rec.truth_mode != "linear":
            continue
        if rec.tracked_word == rec.truth_word:
            out.append(0.0)
        else:
            out.append(
                word_center_distance_cm(run.layout, rec.tracked_word, rec.truth_word)
            )
    return out


def raw_errors_cm(run: ScenarioRun) -> list[float]:
    """Injected |observed - true| gaze error at each valid sample."""
    ppcm = run.layout.config.pixels_per_cm
    out = []
    for s, (tx, ty) in zip(run.trace.samples, run.trace.true_points):
        if s.valid:
            out.append(float(np.hypot(s.x - tx, s.y - ty)) / ppcm)
    return out


def truth_line_at(run: ScenarioRun, t_ms: int) -> int:
    times = [tr.t_ms for tr in run.trace.truth]
    i = min(bisect.bisect_right(times, t_ms) - 1, len(times) - 1)
    i = max(i, 0)
    return run.layout.words[run.trace.truth[i].word].line_index


def landing_line_before(run: ScenarioRun, t_ms: int) -> int:
    """The line the reader jumped to, for the jump detected at t_ms.

    Detection confirms a jump 2.5 s of reading after the transit, so the
    correct relocation target is the first linearly-read line after the most
    recent transit, not necessarily the line being read at detection time.
    A detection without a fresh transit behind it (a re-detection after a bad
    relocation left the tracker on the wrong line) is judged against the line
    actually being read at t_ms.
    """
    redetect_window_ms = 5000
    truth = run.trace.truth
    times = [tr.t_ms for tr in truth]
    i = min(bisect.bisect_right(times, t_ms) - 1, len(times) - 1)
    i = max(i, 0)
    j = i
    while j >= 0 and truth[j].mode != "jumping":
        j -= 1
    if j < 0 or t_ms - truth[j].t_ms > redetect_window_ms:
        return truth_line_at(run, t_ms)
    while j < len(truth) and truth[j].mode != "linear":
        j += 1
    if j >= len(truth):
        return truth_line_at(run, t_ms)
    return run.layout.words[truth[j].word].line_index


@dataclass
class JumpOutcome:
    t_detect_ms: int
    n_candidates: int
    elected_line: int
    truth_line: int
    reason: str

    @property
    def correct(self) -> bool:
        return self.elected_line == self.truth_line


def jump_outcomes(run: ScenarioRun) -> list[JumpOutcome]:
    outcomes = []
    pending_detect: int | None = None
    for ev in run.events:
        if isinstance(ev, JumpDetected):
            pending_detect = ev.t_ms
        elif isinstance(ev, RelocationApplied) and ev.reason != "forced":
            detect_t = pending_detect if pending_detect is not None else ev.t_ms
            n_cands = len(ev.election.candidates) if ev.election is not None else 0
            outcomes.append(
                JumpOutcome(
                    t_detect_ms=detect_t,
                    n_candidates=n_cands,
                    elected_line=ev.line,
                    truth_line=landing_line_before(run, detect_t),
                    reason=ev.reason,
                )
            )
            pending_detect = None
    return outcomes


def y_residuals(run: ScenarioRun) -> list[tuple[float, float]]:
    """(t_s, signed vertical residual cm) at valid linear timestamps."""
    ppcm = run.layout.config.pixels_per_cm
    out = []
    for rec in run.samples:
        if not rec.valid or rec.truth_mode != "linear":
            continue
        center = run.layout.lines[
            run.layout.words[rec.truth_word].line_index
        ].y_center_px
        out.append((rec.t_ms / 1000.0, (rec.cal_y - center) / ppcm))
    return out


def bin_y_timeline(
    residuals: list[tuple[float, float]], bin_s: float = Y_BIN_S
) -> list[tuple[float, float]]:
    """Per-time-bin |mean signed residual|: the systematic vertical error.

    Binning the signed residual first averages out per-sample noise, leaving
    the calibration/drift component the ablation is about.
    """
    if not residuals:
        return []
    bins: dict[int, list[float]] = {}
    for t_s, r in residuals:
        bins.setdefault(int(t_s // bin_s), []).append(r)
    return [
        (k * bin_s + bin_s / 2.0, abs(float(np.mean(v))))
        for k, v in sorted(bins.items())
    ]


def _bucket(n_candidates: int) -> str:
    if n_candidates <= 0:
        return "0"
    if n_candidates == 1:
        return "1"
    if n_candidates == 2:
        return "2"
    return "3plus"


@dataclass
class MetricsReport:
    linear_error_cm: dict
    raw_error_mean_cm: float
    jump_accuracy: dict
    y_error_timeline: list[tuple[float, float]]
    force_relocation_count: int
    scenarios: list[dict]

    def to_dict(self) -> dict:
        return {
            "linear_error_cm": self.linear_error_cm,
            "raw_error_mean_cm": self.raw_error_mean_cm,
            "jump_accuracy": self.jump_accuracy,
            "y_error_timeline": [[t, e] for t, e in self.y_error_timeline],
            "force_relocation_count": self.force_relocation_count,
            "scenarios": self.scenarios,
        }


@dataclass
class LatencyReport:
    ingest_mean_ms: float
    ingest_max_ms: float
    election_scoring_mean_ms: float
    election_scoring_max_ms: float
    n_ingests: int
    n_elections: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def compute_metrics(runs: list[ScenarioRun]) -> tuple[MetricsReport, LatencyReport]:
    if not runs:
        raise ValueError("no scenarios")
    lin: list[float] = []
    raw: list[float] = []
    residuals: list[tuple[float, float]] = []
    outcomes: list[JumpOutcome] = []
    force_count = 0
    for run in runs:
        lin.extend(linear_errors_cm(run))
        raw.extend(raw_errors_cm(run))
        residuals.extend(y_residuals(run))
        outcomes.extend(jump_outcomes(run))
        force_count += run.force_relocation_count

    buckets: dict[str, dict] = {}
    for key in ("1", "2", "3plus", "0", "overall"):
        buckets[key] = {"correct": 0, "total": 0, "accuracy": None}
    for oc in outcomes:
        for key in (_bucket(oc.n_candidates), "overall"):
            buckets[key]["total"] += 1
            buckets[key]["correct"] += int(oc.correct)
    for b in buckets.values():
        if b["total"]:
            b["accuracy"] = b["correct"] / b["total"]

    lin_arr = np.array(lin) if lin else np.zeros(0)
    report = MetricsReport(
        linear_error_cm={
            "mean": float(lin_arr.mean()) if lin else None,
            "p50": float(np.percentile(lin_arr, 50)) if lin else None,
            "p90": float(np.percentile(lin_arr, 90)) if lin else None,
            "count": int(lin_arr.size),
        },
        raw_error_mean_cm=float(np.mean(raw)) if raw else 0.0,
        jump_accuracy=buckets,
        y_error_timeline=bin_y_timeline(residuals),
        force_relocation_count=force_count,
        scenarios=[
            {"name": r.script.name, "seed": r.script.seed} for r in runs
        ],
    )

    ingest = [t for r in runs for t in r.ingest_seconds]
    elections = [t for r in runs for t in r.election_scoring_seconds]
    latency = LatencyReport(
        ingest_mean_ms=float(np.mean(ingest)) * 1000.0 if ingest else 0.0,
        ingest_max_ms=float(np.max(ingest)) * 1000.0 if ingest else 0.0,
        election_scoring_mean_ms=(
            float(np.mean(elections)) * 1000.0 if elections else 0.0
        ),
        election_scoring_max_ms=(
            float(np.max(elections)) * 1000.0 if elections else 0.0
        ),
        n_ingests=len(ingest),
        n_elections=len(elections),
    )
    return report, latency


def run_suite(
    scripts: list[ScenarioScript],
    range_model: ErrorRangeModel,
    vec_model: ErrorVectorModel,
    provider,
    drift: DriftModel | None = None,
    calibration_on: bool = True,
    layout_config: LayoutConfig | None = None,
) -> tuple[MetricsReport, LatencyReport, list[ScenarioRun]]:
    if not scripts:
        raise ValueError("no scenarios")
    layout_config = layout_config or LayoutConfig()
    layouts: dict[str, DocumentLayout] = {}
    runs = []
    for script in scripts:
        layout = layouts.get(script.document)
        if layout is None:
            layout = layout_document(script.document, layout_config)
            layouts[script.document] = layout
        runs.append(
            run_scenario(
                script,
                layout,
                range_model,
                vec_model,
                drift,
                provider,
                calibration_on=calibration_on,
            )
        )
    report, latency = compute_metrics(runs)
    return report, latency, runs


def ablate(
    scripts_for_seed,
    seeds: list[int],
    range_model: ErrorRangeModel,
    vec_model: ErrorVectorModel,
    provider,
    drift: DriftModel,
    layout_config: LayoutConfig | None = None,
) -> dict:
    """Paired calibration-on/off runs over identical seeds.

    `scripts_for_seed` maps a seed to one ScenarioScript.
    """
    arms = {}
    for calibration_on in (True, False):
        scripts = [scripts_for_seed(seed) for seed in seeds]
        report, latency, _ = run_suite(
            scripts,
            range_model,
            vec_model,
            provider,
            drift=drift,
            calibration_on=calibration_on,
            layout_config=layout_config,
        )
        key = "calibrated" if calibration_on else "uncalibrated"
        timeline = report.y_error_timeline
        arms[key] = {
            "y_error_timeline": [[t, e] for t, e in timeline],
            "mean_abs_y_error_cm": (
                float(np.mean([e for _, e in timeline])) if timeline else 0.0
            ),
        }
    return arms


# --- report files -----------------------------------------------------------


def _fmt_acc(bucket: dict) -> str:
    if not bucket["total"]:
        return "n/a"
    return f"{bucket['accuracy'] * 100.0:.2f}% ({bucket['correct']}/{bucket['total']})"


def report_write(report: MetricsReport, out_dir: str) -> dict[str, str]:
    """Write metrics.json, timeline.csv, and summary.txt (byte-stable)."""
    if not report.scenarios:
        raise ValueError("no scenarios")
    os.makedirs(out_dir, exist_ok=True)
    paths = {}

    metrics_path = os.path.join(out_dir, "metrics.json")
    with open(metrics_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths["metrics"] = metrics_path

    timeline_path = os.path.join(out_dir, "timeline.csv")
    with open(timeline_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t_s,mean_abs_y_error_cm\n")
        for t, e in report.y_error_timeline:
            fh.write(f"{t:.6g},{e:.8g}\n")
    paths["timeline"] = timeline_path

    summary_path = os.path.join(out_dir, "summary.txt")
    ja = report.jump_accuracy
    lin = report.linear_error_cm
    lines = [
        "readtrack metrics summary",
        "=========================",
        f"scenarios: {len(report.scenarios)}",
        "",
        "linear tracking error (cm): "
        + (
            f"mean={lin['mean']:.4f} p50={lin['p50']:.4f} p90={lin['p90']:.4f}"
            if lin["count"]
            else "n/a"
        ),
        f"raw injected gaze error (cm): mean={report.raw_error_mean_cm:.4f}",
        "",
        "jump relocation accuracy by candidate count:",
        f"  1 candidate : {_fmt_acc(ja['1'])}",
        f"  2 candidates: {_fmt_acc(ja['2'])}",
        f"  >=3         : {_fmt_acc(ja['3plus'])}",
        f"  no candidate: {_fmt_acc(ja['0'])}",
        f"  overall     : {_fmt_acc(ja['overall'])}",
        "",
        f"force relocations: {report.force_relocation_count}",
        "",
    ]
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
    paths["summary"] = summary_path
    return paths


def latency_write(latency: LatencyReport, out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "latency.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(latency.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
