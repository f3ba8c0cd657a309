"""Jump-reading relocation: candidate capture, match scoring, and election.

Candidates are punctuation anchors falling inside the error range swept by
the gaze trajectory.  Each candidate's following sentence is scored with the
match ratio: the mean, over trajectory points, of the fraction of the error
vector cloud landing on the sentence.  The language model's pick receives a
0.1 bonus; the highest total wins, ties broken by document order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errormodels import ErrorRangeModel, ErrorVectorModel, overlap_fraction, range_at
from .geometry import DocumentLayout, Rect, SentenceSpan, anchors_in_region
from .llm import ElectionQuery

LLM_BONUS = 0.1
SHORTLIST_SIZE = 3
TRAJECTORY_CAP = 50
# Election looks at the landing stretch of the trajectory, anchored on the
# detection timestamp (landing happened roughly one escape threshold before
# it).  The window excludes the saccade in flight at the head of the
# recording and any stray pre-jump noise points, and it caps how far past
# detection scoring reaches: points recorded long after landing track the
# reader moving on, which would systematically favor long sentences whose
# boxes happen to cover more of the page.
PRE_DETECT_MS = 2100
POST_DETECT_MS = 600


def landing_window(
    points: list[tuple[int, float, float]],
    detect_t_ms: int | None = None,
    pre_ms: int = PRE_DETECT_MS,
    post_ms: int = POST_DETECT_MS,
) -> list[tuple[int, float, float]]:
    """Trajectory points in [detect - pre_ms, detect + post_ms]."""
    if not points:
        return []
    if detect_t_ms is None:
        detect_t_ms = points[-1][0]
    kept = [p for p in points if detect_t_ms - pre_ms <= p[0] <= detect_t_ms + post_ms]
    return kept or list(points)


class NoCandidates(ValueError):
    """No anchor fell within the trajectory's error range."""


@dataclass
class Candidate:
    anchor_index: int
    sentence: SentenceSpan
    match_ratio: float = 0.0
    llm_bonus: float = 0.0

    @property
    def total(self) -> float:
        return self.match_ratio + self.llm_bonus


@dataclass(frozen=True)
class ElectionResult:
    winner_anchor: int
    reason: str  # "single-candidate" or "election"
    candidates: tuple[Candidate, ...]
    llm_choice_anchor: int | None
    scoring_seconds: float  # non-LLM portion of the election


def subsample_trajectory(
    points: list[tuple[int, float, float]], cap: int = TRAJECTORY_CAP
) -> list[tuple[int, float, float]]:
    """At most `cap` points, uniform in index order (bounds election cost)."""
    n = len(points)
    if n <= cap:
        return list(points)
    return [points[(i * (n - 1)) // (cap - 1)] for i in range(cap)]


def identify_candidates(
    points: list[tuple[int, float, float]],
    layout: DocumentLayout,
    range_model: ErrorRangeModel,
    pixels_per_cm: float,
) -> list[Candidate]:
    """Anchors inside the union of per-point error rectangles, document order.

    An anchor counts as captured when the mark itself is in range or when the
    first word of its following sentence is: the mark and the sentence start
    are the same reading location, but a line wrap can put the mark at the far
    right of the previous line, outside any rectangle around the landing.
    """
    if not points:
        raise ValueError("trajectory must be non-empty")
    rects = []
    for _, x, y in points:
        h, v = range_at(range_model, x, y, pixels_per_cm)
        rects.append(Rect(x - h, y - v, x + h, y + v))
    hits = set(anchors_in_region(layout, rects))
    for a in layout.anchors:
        start, _ = a.following_sentence.word_range
        if start >= len(layout.words):
            continue
        box = layout.words[start].box
        cx, cy = (box.x0 + box.x1) / 2.0, (box.y0 + box.y1) / 2.0
        if any(r.contains(cx, cy) for r in rects):
            hits.add(a.index)
    return [
        Candidate(anchor_index=i, sentence=layout.anchors[i].following_sentence)
        for i in sorted(hits)
    ]


def match_ratio(
    candidate: Candidate,
    points: list[tuple[int, float, float]],
    vec_model: ErrorVectorModel,
    pixels_per_cm: float,
) -> float:
    """Mean cloud-overlap fraction of the candidate sentence over the trajectory."""
    if not points:
        raise ValueError("trajectory must be non-empty")
    region = list(candidate.sentence.boxes)
    total = 0.0
    for _, x, y in points:
        total += overlap_fraction(vec_model, x, y, region, pixels_per_cm)
    return total / len(points)


def shortlist(candidates: list[Candidate], size: int = SHORTLIST_SIZE) -> list[Candidate]:
    """Top candidates by ratio; equal ratios keep document order."""
    ranked = sorted(candidates, key=lambda c: (-c.match_ratio, c.anchor_index))
    return ranked[:size]


def elect(candidates: list[Candidate], llm_choice: int | None) -> int:
    """Winning anchor index.  `llm_choice` indexes into `candidates`."""
    if not candidates:
        raise NoCandidates("empty candidate list")
    if len(candidates) == 1:
        return candidates[0].anchor_index
    for c in candidates:
        c.llm_bonus = 0.0
    if llm_choice is not None:
        candidates[llm_choice].llm_bonus = LLM_BONUS
    best = min(candidates, key=lambda c: (-c.total, c.anchor_index))
    return best.anchor_index


class Elector:
    """Bundles models and the LLM provider behind the tracker's relocation hook."""

    def __init__(
        self,
        layout: DocumentLayout,
        range_model: ErrorRangeModel,
        vec_model: ErrorVectorModel,
        pixels_per_cm: float,
        provider=None,
        trajectory_cap: int = TRAJECTORY_CAP,
    ):
        self.layout = layout
        self.range_model = range_model
        self.vec_model = vec_model
        self.pixels_per_cm = pixels_per_cm
        self.provider = provider
        self.trajectory_cap = trajectory_cap

    def run(
        self,
        points: list[tuple[int, float, float]],
        history_text: str,
        detect_t_ms: int | None = None,
    ) -> ElectionResult:
        """Full election over a recorded trajectory.

        Raises NoCandidates when the trajectory captured no anchor; the
        tracker applies its nearest-line fallback in that case.
        """
        t0 = time.perf_counter()
        window = landing_window(points, detect_t_ms)
        # Capture scans every window point (it is a cheap rectangle test and
        # subsampling can drop the one point nearest the anchor); the cap
        # applies to scoring, whose cost is per-point cloud containment.
        pts = subsample_trajectory(window, self.trajectory_cap)
        candidates = identify_candidates(
            window, self.layout, self.range_model, self.pixels_per_cm
        )
        if not candidates:
            raise NoCandidates("trajectory captured no punctuation anchor")
        if len(candidates) == 1:
            winner = candidates[0].anchor_index
            return ElectionResult(
                winner_anchor=winner,
                reason="single-candidate",
                candidates=tuple(candidates),
                llm_choice_anchor=None,
                scoring_seconds=time.perf_counter() - t0,
            )

        for c in candidates:
            c.match_ratio = match_ratio(c, pts, self.vec_model, self.pixels_per_cm)
        short = shortlist(candidates)
        scoring_seconds = time.perf_counter() - t0

        llm_choice = None
        if self.provider is not None and len(short) >= 2:
            query = ElectionQuery(
                material=self.layout.source_text,
                recent_history=history_text,
                options=tuple(
                    self.layout.sentence_text(c.sentence) or "(end of document)"
                    for c in short
                ),
            )
            llm_choice = self.provider.choose(query)
            if llm_choice is not None and not (0 <= llm_choice < len(short)):
                llm_choice = None

        t1 = time.perf_counter()
        winner = elect(short, llm_choice)
        scoring_seconds += time.perf_counter() - t1
        return ElectionResult(
            winner_anchor=winner,
            reason="election",
            candidates=tuple(candidates),
            llm_choice_anchor=(
                short[llm_choice].anchor_index if llm_choice is not None else None
            ),
            scoring_seconds=scoring_seconds,
        )
