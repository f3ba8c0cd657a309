"""Statistical gaze-error models.

Three models drive the pipeline:

* ``ErrorRangeModel`` -- a coarse screen grid of plausible gaze-error ranges,
  used for jump detection and candidate capture.  Synthesized so interior
  cells carry the overall average error (1.9455 cm) while border and
  bottom-row cells carry inflated ranges.
* ``ErrorVectorModel`` -- a cloud of (estimated - true) gaze offset samples
  drawn from a zero-mean axis-aligned Gaussian (sigma 1.8471 cm horizontal,
  1.2289 cm vertical), used for probabilistic match scoring.
* ``DriftModel`` -- time-linear calibration drift.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import Rect

SIGMA_H_CM = 1.8471
SIGMA_V_CM = 1.2289
BASE_RANGE_CM = 1.9455
DRIFT_START_CM = 1.9244
DRIFT_END_CM = 2.2015
DRIFT_SPAN_S = 330.0
DEFAULT_DRIFT_RATE_CM_S = (DRIFT_END_CM - DRIFT_START_CM) / DRIFT_SPAN_S
DEFAULT_CLOUD_SIZE = 500


@dataclass(frozen=True)
class ErrorRangeModel:
    rows: int
    cols: int
    screen_width_px: int
    screen_height_px: int
    # cells[row][col] = (horizontal_range_cm, vertical_range_cm)
    cells: tuple[tuple[tuple[float, float], ...], ...]

    def cell_at(self, x_px: float, y_px: float) -> tuple[float, float]:
        x = min(max(x_px, 0.0), self.screen_width_px - 1e-9)
        y = min(max(y_px, 0.0), self.screen_height_px - 1e-9)
        col = min(self.cols - 1, int(x / self.screen_width_px * self.cols))
        row = min(self.rows - 1, int(y / self.screen_height_px * self.rows))
        return self.cells[row][col]


@dataclass(frozen=True)
class ErrorVectorModel:
    samples: np.ndarray  # shape (n, 2), offsets in cm (dx, dy)
    sigma_h_cm: float = SIGMA_H_CM
    sigma_v_cm: float = SIGMA_V_CM

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])


@dataclass(frozen=True)
class DriftModel:
    initial_error_cm: float = DRIFT_START_CM
    rate_cm_per_s: float = DEFAULT_DRIFT_RATE_CM_S
    direction: tuple[float, float] = (0.0, 1.0)

    @staticmethod
    def none() -> "DriftModel":
        return DriftModel(initial_error_cm=0.0, rate_cm_per_s=0.0)


def synth_default_models(
    seed: int,
    rows: int = 4,
    cols: int = 6,
    screen_width_px: int = 1920,
    screen_height_px: int = 1080,
    base_range_cm: float = BASE_RANGE_CM,
    border_multiplier: float = 1.5,
    bottom_multiplier: float = 1.3,
    cloud_size: int = DEFAULT_CLOUD_SIZE,
    sigma_h_cm: float = SIGMA_H_CM,
    sigma_v_cm: float = SIGMA_V_CM,
) -> tuple[ErrorRangeModel, ErrorVectorModel]:
    """Deterministically synthesize the default range and vector models.

    Border cells carry inflated ranges; bottom-row cells get a further
    multiplier (the tracker hardware sits below the screen).
    """
    cells = []
    for r in range(rows):
        row_cells = []
        for c in range(cols):
            v = base_range_cm
            if r in (0, rows - 1) or c in (0, cols - 1):
                v *= border_multiplier
            if r == rows - 1:
                v *= bottom_multiplier
            row_cells.append((v, v))
        cells.append(tuple(row_cells))
    range_model = ErrorRangeModel(
        rows=rows,
        cols=cols,
        screen_width_px=screen_width_px,
        screen_height_px=screen_height_px,
        cells=tuple(cells),
    )

    rng = np.random.default_rng(seed)
    samples = np.column_stack(
        [
            rng.normal(0.0, sigma_h_cm, size=cloud_size),
            rng.normal(0.0, sigma_v_cm, size=cloud_size),
        ]
    )
    vec_model = ErrorVectorModel(
        samples=samples, sigma_h_cm=sigma_h_cm, sigma_v_cm=sigma_v_cm
    )
    return range_model, vec_model


def range_at(
    model: ErrorRangeModel, x_px: float, y_px: float, pixels_per_cm: float
) -> tuple[float, float]:
    """(horizontal, vertical) error range in px at a screen point (clamped)."""
    h_cm, v_cm = model.cell_at(x_px, y_px)
    return h_cm * pixels_per_cm, v_cm * pixels_per_cm


def overlap_fraction(
    model: ErrorVectorModel,
    gaze_x: float,
    gaze_y: float,
    region: list[Rect],
    pixels_per_cm: float,
) -> float:
    """Fraction of the offset cloud, anchored at the gaze point, inside region.

    Half-open rectangle containment, matching all other hit tests.
    """
    if model.count == 0:
        raise ValueError("error vector model has no samples")
    if not region:
        return 0.0
    xs = gaze_x + model.samples[:, 0] * pixels_per_cm
    ys = gaze_y + model.samples[:, 1] * pixels_per_cm
    inside = np.zeros(model.count, dtype=bool)
    for r in region:
        inside |= (xs >= r.x0) & (xs < r.x1) & (ys >= r.y0) & (ys < r.y1)
    return float(inside.mean())


def drift_offset(model: DriftModel, t_s: float) -> tuple[float, float]:
    """Drift offset in cm at elapsed time t_s (linear in t)."""
    if t_s < 0:
        raise ValueError("t_s must be non-negative")
    mag = model.rate_cm_per_s * t_s
    return model.direction[0] * mag, model.direction[1] * mag


def save_range_model(model: ErrorRangeModel, path: str) -> None:
    doc = {
        "rows": model.rows,
        "cols": model.cols,
        "screen": {"w": model.screen_width_px, "h": model.screen_height_px},
        "cells": [
            [{"h_cm": h, "v_cm": v} for (h, v) in row] for row in model.cells
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)


def load_range_model(path: str) -> ErrorRangeModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    cells = tuple(
        tuple((c["h_cm"], c["v_cm"]) for c in row) for row in doc["cells"]
    )
    return ErrorRangeModel(
        rows=doc["rows"],
        cols=doc["cols"],
        screen_width_px=doc["screen"]["w"],
        screen_height_px=doc["screen"]["h"],
        cells=cells,
    )


def save_vector_model(model: ErrorVectorModel, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dx_cm", "dy_cm"])
        for dx, dy in model.samples:
            writer.writerow([f"{dx:.8g}", f"{dy:.8g}"])


def load_vector_model(path: str) -> ErrorVectorModel:
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["dx_cm", "dy_cm"]:
            raise ValueError(f"unexpected vector model header: {header}")
        rows = [(float(a), float(b)) for a, b in reader]
    samples = np.array(rows, dtype=float)
    return ErrorVectorModel(
        samples=samples,
        sigma_h_cm=float(samples[:, 0].std(ddof=1)),
        sigma_v_cm=float(samples[:, 1].std(ddof=1)),
    )
