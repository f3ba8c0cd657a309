"""Default scenario suite: three reading materials and scripted gaze plans.

The suite covers pure linear reading, single reviews (backward jumps),
single previews (forward jumps), multi-jump sessions, and look-away
interruptions, each with a fixed seed so every run replays identically.
Jump targets are drawn uniformly from anchor-adjacent words (the first word
after a sentence-terminal mark) at least four lines away from the jump
origin, so jumps are large enough for the escape detector to see.
"""

from __future__ import annotations

import numpy as np

from .geometry import DocumentLayout, LayoutConfig, layout_document
from .simulator import Dwell, Jump, LookAway, ReadLinear, ScenarioScript

MIN_JUMP_LINES = 4
POST_JUMP_WORDS = 28

TEXT_A = (
    "Lighthouses began as open fires burning on hilltops near dangerous harbors, "
    "where ancient pilots steered toward the glow through fog and spray, trusting "
    "that the keepers on shore would stay awake through the night and feed the "
    "flames until every boat had found safe anchorage. The tower at Pharos rose "
    "above Alexandria more than two thousand years ago, and writers of the period "
    "described polished bronze mirrors that threw firelight far across the water, "
    "a claim that modern historians still debate because no drawing of the "
    "apparatus survives. Medieval builders raised smaller towers along the coasts "
    "of Italy and France, where monks tended dim lamps fueled by fish oil for "
    "generations until whale oil arrived, burned far brighter, and remained the "
    "standard fuel for the better part of two smoky centuries. The great leap "
    "came from the French physicist Augustin Fresnel, who designed a stepped lens "
    "that gathered most of a lamp's light into a single horizontal beam, so that "
    "a flame which once reached five miles could suddenly be seen from twenty. "
    "Engineers classified the lenses into orders by size, wound clockwork that "
    "rotated each optic through the night, and gave every station a distinct "
    "flashing pattern, so that sailors peering into the darkness could tell one "
    "cape from another without ever sighting the shore itself. Electrification "
    "ended the age of resident keepers and automation followed close behind, yet "
    "hundreds of towers still operate around the world today, kept alive by "
    "preservation societies that restore the lamps, reopen the spiral stairways, "
    "and invite visitors to climb up and watch the sea."
)

TEXT_B = (
    "Glassmaking started with sand, ash, and steady fire in Bronze Age workshops, "
    "where Egyptian artisans shaped small perfume bottles around cores of packed "
    "clay long before anyone blew glass. Roman workers discovered glassblowing "
    "and turned a palace luxury into a common household material within little "
    "more than a single well-documented generation of intense workshop "
    "experiment. A skilled blower could gather molten glass on an iron pipe, "
    "inflate it with one steady breath, and swing the glowing bubble into the "
    "shape of a finished jug within minutes. Ordinary families could suddenly "
    "afford cups and window panes that earlier generations had seen only in "
    "temples, and the appetite for clear glass never afterwards went away. "
    "Venice dominated the craft for centuries, moving every furnace to the "
    "island of Murano to guard its secrets and to keep the fires away from "
    "wooden houses. Craftsmen there learned to make a glass so clear that it "
    "resembled rock crystal, while England later added lead to the melt and "
    "produced a heavy glass that sparkled under candlelight. Industrial "
    "chemistry changed everything again, as continuous furnaces replaced the "
    "small pots and machines drew wide flat sheets directly from the glowing "
    "melt. In the twentieth century a British engineer floated ribbons of molten "
    "glass on a bath of liquid tin, and the process yielded perfectly smooth "
    "panes at enormous scale. A thread of pure glass can now guide a pulse of "
    "light across an entire ocean, and chemists keep removing impurities so the "
    "signals travel ever farther between repeaters."
)

TEXT_C = (
    "A river delta forms where flowing water meets still water and slows. The "
    "current loses the strength to carry its load of silt. Sediment settles "
    "layer upon layer until new land rises above the surface. The Nile built "
    "the most famous delta of all, and Greek travelers named the landform after "
    "their own triangular letter. Its branches enclosed fields that fed Egypt "
    "for fifty centuries without exhaustion. Deltas grow in lobes that reach "
    "seaward one after another. A channel extends, chokes on its own deposits, "
    "and then the river abruptly shifts to a steeper path. Abandoned lobes sink "
    "slowly as their sediments compact beneath the marsh. Fresh floods once "
    "repaired that sinking every single year. Modern dams now trap the silt far "
    "upstream behind concrete walls. Levees pin the channels in place and "
    "starve the wetlands beside them. Coastal Louisiana loses a football field "
    "of marsh every hour by some estimates. Engineers respond with diversions "
    "that cut gates into the levees and let muddy water rebuild the swamps. "
    "Deltas also shelter remarkable life in their shallows. Mangroves anchor "
    "the new mud and nurse young fish among their roots. Migrating birds crowd "
    "the flats each spring and autumn on their way north or south. Farmers "
    "prize delta soil above all other ground. Half a billion people live on "
    "these low plains today. Rising seas press against them while the land "
    "itself slowly subsides. The contest between river mud and ocean water "
    "will decide the shape of many coastlines. Scientists therefore measure "
    "each flood season closely. The future of every delta depends on sediment."
)

TEXT_D = (
    "Honeybees navigate by the sun even on days when clouds cover most of the "
    "sky, because their eyes register the polarization of scattered light, and "
    "a forager returning from a distant meadow can hold her course within a few "
    "degrees across two miles of hedgerows, roads, and open water. Inside the "
    "dark hive she performs the waggle dance on the vertical comb, translating "
    "the remembered flight into a figure that encodes both distance and "
    "direction, while dozens of younger workers press close around her body to "
    "read the vibrations with organs buried in their legs. Scouts use the same "
    "language in late spring when a crowded colony prepares to swarm, "
    "advertising hollow trees and abandoned boxes to one another for days, "
    "until the dancers arguing for the best cavity gradually win over every "
    "rival faction and the whole cloud of bees lifts away together. Beekeepers "
    "learned long ago to exploit this fidelity by moving hives at night, when "
    "every forager is home, because a colony shifted only a few yards in "
    "daylight will lose its field force to the empty air where the entrance "
    "used to hang. Modern researchers attach tiny radar transponders to "
    "individual bees and have confirmed what the dances promised, mapping "
    "flight lines that run straight as surveyors' chains from the hive mouth "
    "to the blossoms, with corrections for wind that the insects compute on "
    "the wing faster than any instrument we can build."
)

TEXTS = (TEXT_A, TEXT_B, TEXT_C, TEXT_D)


def _anchor_adjacent_words(layout: DocumentLayout) -> list[int]:
    """First word after each sentence-terminal mark (jump landing points)."""
    out = []
    for a in layout.anchors:
        start, _ = a.following_sentence.word_range
        if start < len(layout.words):
            out.append(start)
    return out


def _pick_target(
    layout: DocumentLayout,
    rng: np.random.Generator,
    origin_word: int,
    direction: str,
) -> int | None:
    origin_line = layout.words[origin_word].line_index
    n_words = len(layout.words)
    candidates = []
    for w in _anchor_adjacent_words(layout):
        line = layout.words[w].line_index
        if w + POST_JUMP_WORDS >= n_words:
            continue
        # A landing near the end of a line gives the tracker almost no dwell
        # time there: detection confirms a jump only after 2.5 s of reading
        # (about seven words), and if the reader wraps to the next line first,
        # the landing point leaves the capture window entirely. Jump to
        # targets with enough words left on their own line to read through
        # the detection period.
        if w + 6 >= n_words or layout.words[w + 6].line_index != line:
            continue
        if direction == "back" and origin_line - line >= MIN_JUMP_LINES:
            candidates.append(w)
        elif direction == "forward" and line - origin_line >= MIN_JUMP_LINES:
            candidates.append(w)
    if not candidates:
        return None
    return int(candidates[rng.integers(0, len(candidates))])


def _word_at_fraction(layout: DocumentLayout, frac: float) -> int:
    return min(len(layout.words) - 1, int(len(layout.words) * frac))


def scenario_suite_default(
    layout_config: LayoutConfig | None = None,
) -> list[ScenarioScript]:
    layout_config = layout_config or LayoutConfig()
    scripts: list[ScenarioScript] = []

    for ti, text in enumerate(TEXTS):
        layout = layout_document(text, layout_config)
        n = len(layout.words)

        # pure linear, two speeds per text
        for si, wpm in enumerate((150.0, 200.0)):
            scripts.append(
                ScenarioScript(
                    name=f"linear-t{ti}-{si}",
                    document=text,
                    actions=(ReadLinear(0, n - 1, wpm),),
                    seed=1000 + ti * 10 + si,
                )
            )

        # single review (backward jump)
        for si, frac in enumerate((0.55, 0.65, 0.75, 0.85)):
            seed = 2000 + ti * 10 + si
            rng = np.random.default_rng(seed)
            origin = _word_at_fraction(layout, frac)
            target = _pick_target(layout, rng, origin, "back")
            if target is None:
                continue
            wpm = 160.0
            scripts.append(
                ScenarioScript(
                    name=f"review-t{ti}-{si}",
                    document=text,
                    actions=(
                        ReadLinear(0, origin, wpm),
                        Jump(target),
                        ReadLinear(target, target + POST_JUMP_WORDS, wpm),
                    ),
                    seed=seed,
                )
            )

        # single preview (forward jump)
        for si, frac in enumerate((0.15, 0.25, 0.35)):
            seed = 3000 + ti * 10 + si
            rng = np.random.default_rng(seed)
            origin = _word_at_fraction(layout, frac)
            target = _pick_target(layout, rng, origin, "forward")
            if target is None:
                continue
            wpm = 165.0
            scripts.append(
                ScenarioScript(
                    name=f"preview-t{ti}-{si}",
                    document=text,
                    actions=(
                        ReadLinear(0, origin, wpm),
                        Jump(target),
                        ReadLinear(target, target + POST_JUMP_WORDS, wpm),
                    ),
                    seed=seed,
                )
            )

        # multi-jump: a review followed by a preview
        for si, frac in enumerate((0.6, 0.7)):
            seed = 4000 + ti * 10 + si
            rng = np.random.default_rng(seed)
            origin = _word_at_fraction(layout, frac)
            back = _pick_target(layout, rng, origin, "back")
            if back is None:
                continue
            mid = back + POST_JUMP_WORDS
            forward = _pick_target(layout, rng, mid, "forward")
            wpm = 160.0
            actions: list = [
                ReadLinear(0, origin, wpm),
                Jump(back),
                ReadLinear(back, mid, wpm),
            ]
            if forward is not None:
                actions += [
                    Jump(forward),
                    ReadLinear(forward, forward + POST_JUMP_WORDS, wpm),
                ]
            scripts.append(
                ScenarioScript(
                    name=f"multijump-t{ti}-{si}",
                    document=text,
                    actions=tuple(actions),
                    seed=seed,
                )
            )

        # look-away interleaved with linear reading
        seed = 5000 + ti
        mid = _word_at_fraction(layout, 0.4)
        end = _word_at_fraction(layout, 0.8)
        scripts.append(
            ScenarioScript(
                name=f"lookaway-t{ti}",
                document=text,
                actions=(
                    ReadLinear(0, mid, 170.0),
                    LookAway(4.0),
                    ReadLinear(mid + 1, end, 170.0),
                ),
                seed=seed,
            )
        )

    return scripts


def pure_linear_suite(layout_config: LayoutConfig | None = None) -> list[ScenarioScript]:
    return [
        s
        for s in scenario_suite_default(layout_config)
        if not any(isinstance(a, Jump) for a in s.actions)
    ]


def jump_suite(layout_config: LayoutConfig | None = None) -> list[ScenarioScript]:
    return [
        s
        for s in scenario_suite_default(layout_config)
        if any(isinstance(a, Jump) for a in s.actions)
    ]


def ablation_script(seed: int, wpm: float = 130.0) -> ScenarioScript:
    """One long linear read (about 125 s) used by the calibration ablation."""
    n = len(TEXT_A.split())
    return ScenarioScript(
        name=f"ablation-{seed}",
        document=TEXT_A,
        actions=(ReadLinear(0, n - 1, wpm),),
        seed=seed,
    )
