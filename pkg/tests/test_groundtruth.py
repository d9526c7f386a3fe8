import json
from pathlib import Path

import numpy as np
import pytest

from moodwear.features import FeatureWindow
from moodwear.groundtruth import (
    DegenerateDatasetError,
    MoodLabel,
    OCTANTS,
    OverlappingIntervalsError,
    extend_emas,
    filter_rare_classes,
    label_windows,
    mood_from_likert,
)
from moodwear.ingest import EmaEntry, LikertOutOfRangeError

SHARED_GRID = Path(__file__).parent.parent / "shared" / "mood-grid.json"

# Hand-derived octant table: angle of (h-2, a-2) rounded to the nearest 45°.
EXPECTED_GRID = {
    (0, 0): "depression", (0, 1): "depression", (0, 2): "misery",
    (0, 3): "distress", (0, 4): "distress",
    (1, 0): "depression", (1, 1): "depression", (1, 2): "misery",
    (1, 3): "distress", (1, 4): "distress",
    (2, 0): "sleepiness", (2, 1): "sleepiness", (2, 2): "neutral",
    (2, 3): "arousal", (2, 4): "arousal",
    (3, 0): "contentment", (3, 1): "contentment", (3, 2): "pleasure",
    (3, 3): "excitement", (3, 4): "excitement",
    (4, 0): "contentment", (4, 1): "contentment", (4, 2): "pleasure",
    (4, 3): "excitement", (4, 4): "excitement",
}


class TestMoodMapping:
    def test_exhaustive_grid(self):
        for (h, a), want in EXPECTED_GRID.items():
            assert mood_from_likert(h, a).value == want, (h, a)

    def test_spec_anchor_points(self):
        assert mood_from_likert(2, 2) is MoodLabel.NEUTRAL
        assert mood_from_likert(0, 0) is MoodLabel.DEPRESSION
        assert mood_from_likert(4, 4) is MoodLabel.EXCITEMENT
        assert mood_from_likert(2, 0) is MoodLabel.SLEEPINESS
        assert mood_from_likert(0, 2) is MoodLabel.MISERY

    def test_rotation_symmetry(self):
        for h in range(5):
            for a in range(5):
                label = mood_from_likert(h, a)
                opposite = mood_from_likert(4 - h, 4 - a)
                if label is MoodLabel.NEUTRAL:
                    assert opposite is MoodLabel.NEUTRAL
                else:
                    idx = OCTANTS.index(label)
                    assert OCTANTS[(idx + 4) % 8] is opposite

    def test_out_of_range(self):
        with pytest.raises(LikertOutOfRangeError):
            mood_from_likert(5, 0)
        with pytest.raises(LikertOutOfRangeError):
            mood_from_likert(0, -1)

    def test_shared_vector_file_in_sync(self):
        doc = json.loads(SHARED_GRID.read_text())
        assert len(doc["entries"]) == 25
        for entry in doc["entries"]:
            key = (entry["happiness"], entry["activeness"])
            assert entry["mood"] == EXPECTED_GRID[key]
            assert mood_from_likert(*key).value == entry["mood"]


def _entry(minute: float, happiness: int = 2, activeness: int = 3) -> EmaEntry:
    return EmaEntry(
        scheduled_at=minute * 60.0,
        answered_at=minute * 60.0,
        happiness=happiness,
        activeness=activeness,
    )


def _spans(intervals):
    return [(iv.left / 60.0, iv.right / 60.0) for iv in intervals]


H = 60.0  # minutes per hour


class TestExtendEmas:
    """Hand-derived extension scenarios (minutes since midnight)."""

    def test_overlap_split_at_midpoint(self):
        intervals = extend_emas(
            [_entry(9 * H), _entry(9 * H + 40)], 120.0, (7 * H * 60, 22 * H * 60)
        )
        assert _spans(intervals) == [(8 * H, 9 * H + 20), (9 * H + 20, 10 * H + 40)]

    def test_single_answer_clipped_at_day_start(self):
        intervals = extend_emas([_entry(9 * H)], 120.0, (8.5 * H * 60, 22 * H * 60))
        assert _spans(intervals) == [(8.5 * H, 10 * H)]

    def test_single_answer_clipped_at_day_end(self):
        intervals = extend_emas([_entry(21.5 * H)], 120.0, (7 * H * 60, 22 * H * 60))
        assert _spans(intervals) == [(20.5 * H, 22 * H)]

    def test_distant_answers_keep_full_spans(self):
        intervals = extend_emas(
            [_entry(9 * H), _entry(13 * H)], 120.0, (7 * H * 60, 22 * H * 60)
        )
        assert _spans(intervals) == [(8 * H, 10 * H), (12 * H, 14 * H)]

    def test_three_chained_answers(self):
        intervals = extend_emas(
            [_entry(9 * H), _entry(9.5 * H), _entry(10 * H)],
            120.0,
            (7 * H * 60, 22 * H * 60),
        )
        assert _spans(intervals) == [
            (8 * H, 9.25 * H),
            (9.25 * H, 9.75 * H),
            (9.75 * H, 11 * H),
        ]

    def test_answer_entirely_before_span_dropped(self):
        intervals = extend_emas(
            [_entry(6 * H), _entry(9 * H)], 120.0, (8 * H * 60, 22 * H * 60)
        )
        assert _spans(intervals) == [(8 * H, 10 * H)]

    def test_gap_exactly_window_touches_without_truncation(self):
        intervals = extend_emas(
            [_entry(9 * H), _entry(11 * H)], 120.0, (7 * H * 60, 22 * H * 60)
        )
        assert _spans(intervals) == [(8 * H, 10 * H), (10 * H, 12 * H)]

    def test_sixty_minute_window_variant(self):
        intervals = extend_emas(
            [_entry(9 * H), _entry(9 * H + 40)], 60.0, (7 * H * 60, 22 * H * 60)
        )
        assert _spans(intervals) == [(8.5 * H, 9 * H + 20), (9 * H + 20, 10 * H + 10)]

    def test_clip_and_midpoint_combined(self):
        intervals = extend_emas(
            [_entry(7.5 * H), _entry(8 * H + 10)], 120.0, (7.75 * H * 60, 22 * H * 60)
        )
        assert _spans(intervals) == [
            (7.75 * H, 7 * H + 50),
            (7 * H + 50, 9 * H + 10),
        ]

    def test_outputs_disjoint_sorted_within_span(self, rng):
        span = (0.0, 15 * 3600.0)
        for _ in range(50):
            times = np.sort(rng.choice(np.arange(100, 53000, 60), size=6, replace=False))
            entries = [_entry(t / 60.0) for t in times.astype(float)]
            intervals = extend_emas(entries, float(rng.choice([30, 60, 120])), span)
            for iv in intervals:
                assert span[0] <= iv.left < iv.right <= span[1]
            for a, b in zip(intervals, intervals[1:]):
                assert a.right <= b.left

    def test_empty_input(self):
        assert extend_emas([], 60.0, (0.0, 100.0)) == []


def _window(start_s: float) -> FeatureWindow:
    return FeatureWindow(start=start_s, end=start_s + 60.0, values=np.zeros(203))


class TestLabelWindows:
    def test_midpoint_containment(self):
        intervals = extend_emas([_entry(9 * H)], 120.0, (7 * H * 60, 22 * H * 60))
        labeled = label_windows([_window(9 * 3600.0)], intervals)
        assert len(labeled) == 1
        assert labeled[0].mood is MoodLabel.AROUSAL  # (2, 3)

    def test_right_edge_excluded(self):
        intervals = extend_emas([_entry(9 * H)], 120.0, (7 * H * 60, 22 * H * 60))
        right = intervals[0].right
        labeled = label_windows([_window(right - 30.0)], intervals)  # midpoint == right
        assert labeled == []

    def test_no_intervals(self):
        assert label_windows([_window(0.0)], []) == []

    def test_equal_midpoints_equal_labels(self):
        intervals = extend_emas(
            [_entry(9 * H, 4, 4), _entry(11 * H, 0, 0)], 120.0, (7 * H * 60, 22 * H * 60)
        )
        w1 = FeatureWindow(start=9 * 3600.0, end=9 * 3600.0 + 60.0, values=np.zeros(203))
        w2 = FeatureWindow(start=9 * 3600.0 - 30, end=9 * 3600.0 + 90.0, values=np.zeros(203))
        l1 = label_windows([w1], intervals)
        l2 = label_windows([w2], intervals)
        assert l1[0].mood == l2[0].mood

    def test_overlapping_intervals_rejected(self):
        from moodwear.groundtruth import GroundTruthInterval

        e = _entry(9 * H)
        bad = [
            GroundTruthInterval(0.0, 100.0, MoodLabel.NEUTRAL, 2, 2, e),
            GroundTruthInterval(50.0, 150.0, MoodLabel.NEUTRAL, 2, 2, e),
        ]
        with pytest.raises(OverlappingIntervalsError):
            label_windows([_window(10.0)], bad)


def _example(mood: MoodLabel):
    from moodwear.groundtruth import LabeledExample

    return LabeledExample(
        features=_window(0.0),
        mood=mood,
        happiness=2,
        activeness=2,
        source=_entry(0.0),
    )


class TestRareClassFilter:
    def test_ten_percent_rule(self):
        examples = (
            [_example(MoodLabel.PLEASURE)] * 50
            + [_example(MoodLabel.SLEEPINESS)] * 41
            + [_example(MoodLabel.MISERY)] * 9
        )
        kept, dropped = filter_rare_classes(examples)
        assert len(kept) == 91
        assert dropped == [MoodLabel.MISERY]
        assert len(kept) + 9 == len(examples)

    def test_single_label_kept(self):
        examples = [_example(MoodLabel.NEUTRAL)] * 5
        kept, dropped = filter_rare_classes(examples)
        assert len(kept) == 5 and dropped == []

    def test_exact_boundary_kept(self):
        examples = [_example(MoodLabel.PLEASURE)] * 90 + [_example(MoodLabel.AROUSAL)] * 10
        kept, dropped = filter_rare_classes(examples)
        assert len(kept) == 100 and dropped == []

    def test_all_dropped_is_error(self):
        examples = [_example(MoodLabel.PLEASURE)] * 3 + [_example(MoodLabel.AROUSAL)] * 3
        with pytest.raises(DegenerateDatasetError):
            filter_rare_classes(examples, min_fraction=0.9)

    def test_empty_is_error(self):
        with pytest.raises(DegenerateDatasetError):
            filter_rare_classes([])
