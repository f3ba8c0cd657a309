import numpy as np
import pytest

from readtrack.election import (
    Candidate,
    Elector,
    LLM_BONUS,
    NoCandidates,
    PRE_DETECT_MS,
    POST_DETECT_MS,
    elect,
    identify_candidates,
    landing_window,
    match_ratio,
    shortlist,
    subsample_trajectory,
)
from readtrack.errormodels import ErrorVectorModel, range_at
from readtrack.geometry import Rect, SentenceSpan


def span(boxes):
    return SentenceSpan(word_range=(0, 1), boxes=tuple(boxes))


# --- landing window ----------------------------------------------------------


def test_landing_window_keeps_detection_neighborhood():
    points = [(t, 0.0, 0.0) for t in range(0, 10000, 100)]
    detect = 5000
    window = landing_window(points, detect)
    assert window[0][0] == detect - PRE_DETECT_MS
    assert window[-1][0] == detect + POST_DETECT_MS
    assert all(detect - PRE_DETECT_MS <= t <= detect + POST_DETECT_MS
               for t, _, _ in window)


def test_landing_window_defaults_to_last_point():
    points = [(t, 0.0, 0.0) for t in range(0, 4000, 100)]
    window = landing_window(points)
    assert window[-1] == points[-1]


def test_landing_window_never_empty():
    points = [(0, 1.0, 2.0)]
    assert landing_window(points, detect_t_ms=99999) == points
    assert landing_window([]) == []


# --- subsampling -------------------------------------------------------------


def test_subsample_under_cap_is_identity():
    points = [(i, float(i), 0.0) for i in range(10)]
    assert subsample_trajectory(points, cap=50) == points


def test_subsample_caps_and_keeps_endpoints():
    points = [(i, float(i), 0.0) for i in range(1000)]
    out = subsample_trajectory(points, cap=50)
    assert len(out) == 50
    assert out[0] == points[0]
    assert out[-1] == points[-1]


# --- candidate capture -------------------------------------------------------


def test_point_on_anchor_captures_it(layout_a, range_model):
    a = layout_a.anchors[3]
    points = [(0, a.x, a.y)]
    cands = identify_candidates(points, layout_a, range_model, 55.6)
    assert 3 in [c.anchor_index for c in cands]


def test_trajectory_in_blank_margin_captures_nothing(layout_a, range_model):
    points = [(0, 5.0, 5.0)]
    # the top-left corner is within range of nothing: range there is
    # ~2.9 cm = 162 px, paragraph starts at x=200, anchors further in
    cands = identify_candidates(points, layout_a, range_model, 55.6)
    assert all(
        layout_a.anchors[c.anchor_index].x < 400 for c in cands
    ) or cands == []


def test_capture_matches_brute_force(layout_a, range_model):
    rng = np.random.default_rng(9)
    ppcm = 55.6
    for _ in range(20):
        points = [
            (i, rng.uniform(200, 1700), rng.uniform(80, 1000))
            for i in range(rng.integers(1, 30))
        ]
        got = [c.anchor_index for c in
               identify_candidates(points, layout_a, range_model, ppcm)]
        rects = []
        for _, x, y in points:
            h, v = range_at(range_model, x, y, ppcm)
            rects.append(Rect(x - h, y - v, x + h, y + v))
        expected = set()
        for a in layout_a.anchors:
            if any(r.contains(a.x, a.y) for r in rects):
                expected.add(a.index)
            start, _ = a.following_sentence.word_range
            if start < len(layout_a.words):
                box = layout_a.words[start].box
                cx, cy = (box.x0 + box.x1) / 2, (box.y0 + box.y1) / 2
                if any(r.contains(cx, cy) for r in rects):
                    expected.add(a.index)
        assert got == sorted(expected)


def test_capture_rejects_empty_trajectory(layout_a, range_model):
    with pytest.raises(ValueError):
        identify_candidates([], layout_a, range_model, 55.6)


# --- match ratio -------------------------------------------------------------


def test_match_ratio_two_point_mean():
    # point 1: whole cloud inside; point 2: half the cloud inside
    samples = np.array([[0.0, 0.1], [0.0, -0.1]])
    model = ErrorVectorModel(samples=samples)
    c = Candidate(0, span([Rect(0.0, 0.0, 100.0, 100.0)]))
    points = [(0, 50.0, 50.0), (16, 50.0, 98.0)]
    # at (50,98): offsets land at y=103 (out) and y=93 (in) with ppcm=50
    assert match_ratio(c, points, model, 50.0) == pytest.approx(0.75)


def test_match_ratio_whole_screen_is_one(vec_model):
    c = Candidate(0, span([Rect(-1e6, -1e6, 1e6, 1e6)]))
    points = [(0, 100.0, 100.0), (16, 900.0, 500.0)]
    assert match_ratio(c, points, vec_model, 55.6) == 1.0


def test_match_ratio_permutation_invariant(vec_model):
    c = Candidate(0, span([Rect(800.0, 400.0, 1200.0, 600.0)]))
    points = [(i, 900.0 + i, 480.0 + i) for i in range(7)]
    a = match_ratio(c, points, vec_model, 55.6)
    b = match_ratio(c, list(reversed(points)), vec_model, 55.6)
    assert a == b


def test_match_ratio_in_unit_interval(vec_model, layout_a):
    rng = np.random.default_rng(2)
    for a in layout_a.anchors[:5]:
        c = Candidate(a.index, a.following_sentence)
        points = [(i, rng.uniform(0, 1920), rng.uniform(0, 1080)) for i in range(9)]
        r = match_ratio(c, points, vec_model, 55.6)
        assert 0.0 <= r <= 1.0


# --- shortlist and elect -----------------------------------------------------


def cands(ratios):
    return [Candidate(i, span([]), match_ratio=r) for i, r in enumerate(ratios)]


def test_shortlist_top_three():
    cs = cands([0.1, 0.4, 0.2, 0.3, 0.05])
    top = shortlist(cs)
    assert [c.anchor_index for c in top] == [1, 3, 2]


def test_shortlist_two_returns_both():
    cs = cands([0.2, 0.1])
    assert [c.anchor_index for c in shortlist(cs)] == [0, 1]


def test_shortlist_equal_ratios_document_order():
    cs = cands([0.2, 0.2, 0.2, 0.2])
    assert [c.anchor_index for c in shortlist(cs)] == [0, 1, 2]


def test_elect_bonus_flips_close_race():
    cs = cands([0.31, 0.25])
    assert elect(cs, llm_choice=1) == 1  # 0.25 + 0.1 > 0.31


def test_elect_bonus_cannot_rescue_weak_candidate():
    cs = cands([0.31, 0.15])
    assert elect(cs, llm_choice=1) == 0  # 0.25 < 0.31


def test_elect_without_llm_is_argmax():
    cs = cands([0.31, 0.25, 0.4])
    assert elect(cs, llm_choice=None) == 2


def test_elect_tie_breaks_by_document_order():
    cs = cands([0.3, 0.3])
    assert elect(cs, llm_choice=None) == 0


def test_elect_single_candidate_immediate():
    cs = cands([0.0])
    assert elect(cs, llm_choice=None) == 0


def test_elect_empty_raises():
    with pytest.raises(NoCandidates):
        elect([], None)


def test_elect_bonus_value():
    cs = cands([0.2, 0.2])
    elect(cs, llm_choice=1)
    assert cs[1].llm_bonus == LLM_BONUS
    assert cs[1].total == pytest.approx(0.3)


def test_elect_winner_invariant_under_ratio_shift():
    base = [0.31, 0.25, 0.12]
    for llm in (None, 0, 1, 2):
        w1 = elect(cands(base), llm_choice=llm)
        w2 = elect(cands([r + 0.17 for r in base]), llm_choice=llm)
        assert w1 == w2


# --- full elector ------------------------------------------------------------


def test_elector_blank_trajectory_raises(layout_a, range_model, vec_model):
    elector = Elector(layout_a, range_model, vec_model, 55.6, provider=None)
    with pytest.raises(NoCandidates):
        elector.run([(0, 5.0, 5.0)], "some history", detect_t_ms=0)


def test_elector_single_candidate_fast_path(layout_a, range_model, vec_model):
    # a lone point directly on one anchor in a sparse area
    a = layout_a.anchors[0]
    elector = Elector(layout_a, range_model, vec_model, 55.6, provider=None)
    result = elector.run([(0, a.x, a.y)], "history", detect_t_ms=0)
    if len(result.candidates) == 1:
        assert result.reason == "single-candidate"
        assert result.llm_choice_anchor is None
    else:
        assert result.reason == "election"


def test_elector_scores_and_elects(layout_a, range_model, vec_model):
    # a trajectory across the middle of the page captures several anchors
    y = layout_a.lines[6].y_center_px
    points = [(i * 16, 300.0 + 40.0 * i, y) for i in range(30)]
    elector = Elector(layout_a, range_model, vec_model, 55.6, provider=None)
    result = elector.run(points, "history text", detect_t_ms=points[-1][0])
    assert result.reason in ("election", "single-candidate")
    winner = result.winner_anchor
    assert 0 <= winner < len(layout_a.anchors)
    if result.reason == "election":
        scored = [c for c in result.candidates if c.match_ratio > 0]
        assert scored, "an election must have scored candidates"
        best = max(c.total for c in result.candidates)
        winner_cand = next(
            c for c in result.candidates if c.anchor_index == winner
        )
        # winner is a total-score argmax among the shortlist
        assert winner_cand.total <= best + 1e-12
    assert result.scoring_seconds >= 0.0
