"""readtrack: real-time reading tracking and highlighting over gaze streams."""

from .calibration import CalibrationModel, GazeLinePair
from .errormodels import (
    DriftModel,
    ErrorRangeModel,
    ErrorVectorModel,
    drift_offset,
    overlap_fraction,
    range_at,
    synth_default_models,
)
from .geometry import (
    DocumentLayout,
    LayoutConfig,
    Rect,
    anchors_in_region,
    layout_document,
    line_at_y,
    word_at,
)
from .tracker import GazeSample, Tracker, TrackerConfig

__all__ = [
    "CalibrationModel",
    "GazeLinePair",
    "DriftModel",
    "ErrorRangeModel",
    "ErrorVectorModel",
    "drift_offset",
    "overlap_fraction",
    "range_at",
    "synth_default_models",
    "DocumentLayout",
    "LayoutConfig",
    "Rect",
    "anchors_in_region",
    "layout_document",
    "line_at_y",
    "word_at",
    "GazeSample",
    "Tracker",
    "TrackerConfig",
]

__version__ = "0.1.0"
