"""Mood labels from Likert answers and their extension over time.

Happiness/activeness pairs (0..4 each) map onto a two-axis affect circle
split into eight octants around a neutral center. Each answered report is
extended into a centered interval, overlapping neighbours are split at
their midpoint, and feature windows take the label of the interval holding
their midpoint.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .features import FEATURE_NAMES, FeatureWindow
from .ingest import EmaEntry, LikertOutOfRangeError


class MoodLabel(Enum):
    PLEASURE = "pleasure"
    EXCITEMENT = "excitement"
    AROUSAL = "arousal"
    DISTRESS = "distress"
    MISERY = "misery"
    DEPRESSION = "depression"
    SLEEPINESS = "sleepiness"
    CONTENTMENT = "contentment"
    NEUTRAL = "neutral"


# Octant order counterclockwise from the positive happiness axis.
OCTANTS = (
    MoodLabel.PLEASURE,
    MoodLabel.EXCITEMENT,
    MoodLabel.AROUSAL,
    MoodLabel.DISTRESS,
    MoodLabel.MISERY,
    MoodLabel.DEPRESSION,
    MoodLabel.SLEEPINESS,
    MoodLabel.CONTENTMENT,
)


class DegenerateDatasetError(ValueError):
    """Rare-class filtering removed every example."""


class OverlappingIntervalsError(RuntimeError):
    pass


def mood_from_likert(happiness: int, activeness: int) -> MoodLabel:
    """Map a Likert pair to its affect octant (grid center = neutral).

    The octant index is the angle of (happiness−2, activeness−2) rounded to
    the nearest multiple of 45°. No achievable integer offset lies on an
    octant boundary, so the rounding never ties.
    """
    for name, value in (("happiness", happiness), ("activeness", activeness)):
        if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 4:
            raise LikertOutOfRangeError(f"{name}={value!r} outside 0..4")
    dx = happiness - 2
    dy = activeness - 2
    if dx == 0 and dy == 0:
        return MoodLabel.NEUTRAL
    theta = math.degrees(math.atan2(dy, dx))
    return OCTANTS[round(theta / 45.0) % 8]


@dataclass(frozen=True)
class GroundTruthInterval:
    left: float
    right: float
    mood: MoodLabel
    happiness: int
    activeness: int
    source: EmaEntry

    def contains(self, t: float) -> bool:
        return self.left <= t < self.right


@dataclass(frozen=True)
class LabeledExample:
    features: FeatureWindow
    mood: MoodLabel
    happiness: int
    activeness: int
    source: EmaEntry
    day: object = None  # calendar day key used by leave-one-day-out

    def target(self, name: str):
        if name == "mood":
            return self.mood
        if name == "happiness":
            return self.happiness
        if name == "activeness":
            return self.activeness
        raise ValueError(f"unknown target {name!r}")


def extend_emas(
    day_entries: list[EmaEntry],
    window_minutes: float,
    span: tuple[float, float],
) -> list[GroundTruthInterval]:
    """Extend each answer into a centered interval within the recording span.

    Nominal spans are [answered_at − W/2, answered_at + W/2]; when two
    consecutive nominal spans overlap both are truncated at the midpoint of
    the two answer times, so each side keeps its half. Everything is clipped
    to the recording span; empty intervals are dropped.
    """
    if window_minutes <= 0:
        raise ValueError("window_minutes must be positive")
    d0, d1 = span
    half = window_minutes * 60.0 / 2.0
    entries = sorted(day_entries, key=lambda e: e.answered_at)

    intervals: list[GroundTruthInterval] = []
    for idx, entry in enumerate(entries):
        left = entry.answered_at - half
        right = entry.answered_at + half
        if idx > 0:
            prev = entries[idx - 1]
            if prev.answered_at + half > left:  # nominal spans overlap
                left = (prev.answered_at + entry.answered_at) / 2.0
        if idx < len(entries) - 1:
            nxt = entries[idx + 1]
            if nxt.answered_at - half < right:
                right = (entry.answered_at + nxt.answered_at) / 2.0
        left = max(left, d0)
        right = min(right, d1)
        if left >= right:
            continue
        intervals.append(
            GroundTruthInterval(
                left=left,
                right=right,
                mood=mood_from_likert(entry.happiness, entry.activeness),
                happiness=entry.happiness,
                activeness=entry.activeness,
                source=entry,
            )
        )
    return intervals


def label_windows(
    windows: list[FeatureWindow],
    intervals: list[GroundTruthInterval],
    day: object = None,
) -> list[LabeledExample]:
    """Label each window by the unique interval containing its midpoint."""
    for a, b in zip(intervals, intervals[1:]):
        if b.left < a.right:
            raise OverlappingIntervalsError(f"intervals overlap at {b.left}")
    out: list[LabeledExample] = []
    for window in windows:
        if not window.valid:
            continue
        mid = window.midpoint
        for interval in intervals:
            if interval.contains(mid):
                out.append(
                    LabeledExample(
                        features=window,
                        mood=interval.mood,
                        happiness=interval.happiness,
                        activeness=interval.activeness,
                        source=interval.source,
                        day=day,
                    )
                )
                break
    return out


def filter_rare_classes(
    examples: list[LabeledExample],
    min_fraction: float = 0.10,
) -> tuple[list[LabeledExample], list[MoodLabel]]:
    """Drop mood classes holding less than ``min_fraction`` of the examples.

    Single pass: fractions are computed once on the input, not re-iterated
    after removal.
    """
    if not examples:
        raise DegenerateDatasetError("no labeled examples")
    counts: dict[MoodLabel, int] = {}
    for ex in examples:
        counts[ex.mood] = counts.get(ex.mood, 0) + 1
    total = len(examples)
    dropped = [label for label in counts if counts[label] / total < min_fraction]
    kept = [ex for ex in examples if ex.mood not in dropped]
    if not kept:
        raise DegenerateDatasetError("rare-class filtering removed every example")
    return kept, sorted(dropped, key=lambda label: label.value)


def write_labeled_table(path: str | Path, examples: list[LabeledExample]) -> None:
    """CSV export: feature table columns plus day, labels and source timestamp."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ("window_start", "window_end")
            + FEATURE_NAMES
            + ("day", "mood", "happiness", "activeness", "ema_answered_at")
        )
        for ex in examples:
            w = ex.features
            writer.writerow(
                [repr(w.start), repr(w.end)]
                + [repr(float(v)) for v in w.values]
                + [
                    "" if ex.day is None else str(ex.day),
                    ex.mood.value,
                    ex.happiness,
                    ex.activeness,
                    repr(ex.source.answered_at),
                ]
            )


def read_labeled_table(path: str | Path) -> list[LabeledExample]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        expected = (
            ["window_start", "window_end"]
            + list(FEATURE_NAMES)
            + ["day", "mood", "happiness", "activeness", "ema_answered_at"]
        )
        if header != expected:
            raise ValueError(f"unexpected labeled table header in {path}")
        n = len(FEATURE_NAMES)
        out = []
        for row in reader:
            window = FeatureWindow(
                start=float(row[0]),
                end=float(row[1]),
                values=np.asarray([float(v) for v in row[2 : 2 + n]], dtype=float),
            )
            day, mood, happiness, activeness, answered_at = row[2 + n :]
            entry = EmaEntry(
                scheduled_at=float(answered_at),
                answered_at=float(answered_at),
                happiness=int(happiness),
                activeness=int(activeness),
            )
            out.append(
                LabeledExample(
                    features=window,
                    mood=MoodLabel(mood),
                    happiness=int(happiness),
                    activeness=int(activeness),
                    source=entry,
                    day=day or None,
                )
            )
        return out
