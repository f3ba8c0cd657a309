"""Dynamic Y-axis gaze calibration from line-gaze alignment.

During linear reading the finished line's vertical center and the mean raw
gaze Y over that line form a calibration pair.  A sliding window of pairs is
fit with ordinary least squares (line center regressed on raw gaze), and the
resulting gain/bias is applied to every raw sample's Y.  X is never touched.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

DEFAULT_MAX_PAIRS = 8
GAIN_MIN = 0.5
GAIN_MAX = 2.0
# The fitted gain replaces 1.0 only when it differs from 1.0 by more than
# this many standard errors.  A gain estimated from a handful of noisy pairs
# and extrapolated to the line being read injects more vertical error than
# the slow drift it removes; the offset-only model cancels uniform drift
# with no gain noise at all.
SLOPE_T_CRIT = 3.0


class NoCalibrationData(ValueError):
    """fit() called on an empty pair window."""


class DegenerateFit(ValueError):
    """Regression produced a non-positive gain; previous model retained."""


@dataclass(frozen=True)
class GazeLinePair:
    y_gaze_px: float  # mean raw gaze Y over the finished line
    y_line_px: float  # the line's vertical center

    def __post_init__(self) -> None:
        if not (math.isfinite(self.y_gaze_px) and math.isfinite(self.y_line_px)):
            raise ValueError("calibration pair must be finite")


class CalibrationModel:
    """Sliding-window linear map raw Y -> calibrated Y.  Identity until fit."""

    def __init__(self, max_pairs: int = DEFAULT_MAX_PAIRS):
        if max_pairs < 1:
            raise ValueError("max_pairs must be >= 1")
        self.max_pairs = max_pairs
        self.k = 1.0
        self.b = 0.0
        self.pairs: deque[GazeLinePair] = deque(maxlen=max_pairs)

    def record_pair(self, pair: GazeLinePair) -> None:
        """Append a pair; the oldest is evicted past max_pairs (FIFO)."""
        self.pairs.append(pair)

    def fit(self) -> tuple[float, float]:
        """Least squares of line centers on gaze means over the window.

        Falls back to an offset-only model when the regression is
        underdetermined (one pair, or zero variance in gaze Y) or when the
        fitted gain is statistically indistinguishable from 1 (fewer than
        three pairs, or within SLOPE_T_CRIT standard errors).  When the gain
        is used it is clamped to [0.5, 2.0] to guard near-degenerate windows.
        """
        n = len(self.pairs)
        if n == 0:
            raise NoCalibrationData("no gaze-line pairs recorded")
        yg = [p.y_gaze_px for p in self.pairs]
        yl = [p.y_line_px for p in self.pairs]
        mg = sum(yg) / n
        ml = sum(yl) / n
        sxx = sum((g - mg) ** 2 for g in yg)
        if n == 1 or sxx == 0.0:
            k = 1.0
            b = ml - mg
        else:
            sxy = sum((g - mg) * (l - ml) for g, l in zip(yg, yl))
            k = sxy / sxx
            if k <= 0.0:
                raise DegenerateFit(f"fitted gain {k:.6g} is non-positive")
            use_slope = False
            if n >= 3:
                b_ols = ml - k * mg
                rss = sum(
                    (l - (k * g + b_ols)) ** 2 for g, l in zip(yg, yl)
                )
                se = math.sqrt(rss / (n - 2) / sxx)
                use_slope = abs(k - 1.0) > SLOPE_T_CRIT * se
            if use_slope:
                k = min(max(k, GAIN_MIN), GAIN_MAX)
                b = ml - k * mg
            else:
                k = 1.0
                b = ml - mg
        self.k, self.b = k, b
        return k, b

    def apply(self, x: float, y: float) -> tuple[float, float]:
        """Calibrate a raw gaze point: X untouched, Y scaled and de-biased."""
        return x, self.k * y + self.b

    def reset(self) -> None:
        """Back to the identity model with an empty window (idempotent)."""
        self.k = 1.0
        self.b = 0.0
        self.pairs.clear()
