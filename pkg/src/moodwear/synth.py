"""Deterministic synthetic study generator.

Builds device-format session directories plus EMA logs whose ground truth
is known exactly, so the full pipeline can be scored end to end at desk
scale. Signal models are deliberately simple: state-dependent baselines
plus Gaussian noise, Poisson-timed skin-conductance bumps with a 1 s rise
and 4 s decay, and band-limited accelerometer activity.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from zoneinfo import ZoneInfo

import numpy as np

from .groundtruth import MoodLabel, mood_from_likert
from .ingest import (
    ChannelKind,
    ChannelSeries,
    EmaEntry,
    SessionRecording,
    write_ema_log,
    write_session,
)

ACC_RATE = 32.0
TEMP_RATE = 4.0
EDA_RATE = 4.0
HR_RATE = 1.0

ANSWER_DELAY_MAX_S = 30.0 * 60.0


@dataclass(frozen=True)
class StateParams:
    hr_baseline: float  # bpm
    hr_sd: float
    eda_tonic: float  # µS
    scr_rate: float  # events/minute
    scr_amplitude: float  # µS
    acc_activity: float  # variance in raw 1/64 g units
    temp_mean: float  # °C

    def validate(self) -> None:
        for name in ("hr_sd", "eda_tonic", "scr_rate", "scr_amplitude", "acc_activity"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class MoodProfile:
    """Per-state signal parameters; separability scales their spread.

    separability 1 keeps the parameters as given, 0 collapses every state
    onto the across-state mean (one indistinguishable distribution).
    """

    states: dict[MoodLabel, StateParams]
    separability: float = 1.0

    def __post_init__(self) -> None:
        if self.separability < 0:
            raise ValueError("separability must be >= 0")
        for params in self.states.values():
            params.validate()

    def effective(self, label: MoodLabel) -> StateParams:
        params = self.states[label]
        fields = (
            "hr_baseline", "hr_sd", "eda_tonic", "scr_rate",
            "scr_amplitude", "acc_activity", "temp_mean",
        )
        center = {
            f: float(np.mean([getattr(p, f) for p in self.states.values()])) for f in fields
        }
        blended = {
            f: center[f] + self.separability * (getattr(params, f) - center[f]) for f in fields
        }
        return StateParams(**blended)


def default_profile(
    labels: tuple[MoodLabel, ...] = (
        MoodLabel.PLEASURE,
        MoodLabel.SLEEPINESS,
        MoodLabel.CONTENTMENT,
    ),
    separability: float = 1.0,
) -> MoodProfile:
    """Well-separated parameter sets for up to five states."""
    presets = [
        StateParams(hr_baseline=60.0, hr_sd=2.0, eda_tonic=2.0, scr_rate=2.0,
                    scr_amplitude=0.30, acc_activity=4.0, temp_mean=32.0),
        StateParams(hr_baseline=100.0, hr_sd=2.0, eda_tonic=6.0, scr_rate=10.0,
                    scr_amplitude=0.80, acc_activity=160.0, temp_mean=33.0),
        StateParams(hr_baseline=80.0, hr_sd=2.0, eda_tonic=4.0, scr_rate=6.0,
                    scr_amplitude=0.50, acc_activity=40.0, temp_mean=32.5),
        StateParams(hr_baseline=70.0, hr_sd=2.0, eda_tonic=3.0, scr_rate=4.0,
                    scr_amplitude=0.40, acc_activity=15.0, temp_mean=31.5),
        StateParams(hr_baseline=90.0, hr_sd=2.0, eda_tonic=5.0, scr_rate=8.0,
                    scr_amplitude=0.65, acc_activity=90.0, temp_mean=33.4),
    ]
    if len(labels) > len(presets):
        raise ValueError(f"at most {len(presets)} states supported by the default profile")
    return MoodProfile(
        states={label: presets[i] for i, label in enumerate(labels)},
        separability=separability,
    )


def _likert_pairs_by_mood() -> dict[MoodLabel, list[tuple[int, int]]]:
    table: dict[MoodLabel, list[tuple[int, int]]] = {}
    for h in range(5):
        for a in range(5):
            table.setdefault(mood_from_likert(h, a), []).append((h, a))
    return table


_LIKERT_PAIRS = _likert_pairs_by_mood()


@dataclass(frozen=True)
class TruthSegment:
    left: float
    right: float
    mood: MoodLabel


@dataclass(frozen=True)
class SynthDay:
    recording: SessionRecording
    emas: list[EmaEntry]
    timeline: list[TruthSegment]


def _state_at(timeline: list[TruthSegment], t: float) -> MoodLabel:
    for seg in timeline:
        if seg.left <= t < seg.right:
            return seg.mood
    return timeline[-1].mood


def _scr_kernel(rate: float, amplitude: float) -> np.ndarray:
    t = np.arange(0.0, 20.0, 1.0 / rate)
    bump = (1.0 - np.exp(-t / 0.3)) * np.exp(-t / 4.0)
    return amplitude * bump / bump.max()


def generate_day(
    profile: MoodProfile,
    states: list[MoodLabel],
    seed: int,
    day_start: float,
    day_seconds: float = 8 * 3600.0,
    prompts_per_day: int = 5,
    session_id: str = "synth",
) -> SynthDay:
    """One synthetic day: recording, answered EMA prompts, true state timeline."""
    if day_seconds <= 0:
        raise ValueError("day_seconds must be positive")
    if not states:
        raise ValueError("need at least one state")
    if prompts_per_day < 1:
        raise ValueError("prompts_per_day must be >= 1")
    rng = np.random.default_rng([seed])
    day_end = day_start + day_seconds

    seg_len = day_seconds / len(states)
    timeline = [
        TruthSegment(day_start + i * seg_len, day_start + (i + 1) * seg_len, label)
        for i, label in enumerate(states)
    ]
    params = {label: profile.effective(label) for label in set(states)}

    def per_sample_params(rate: float, attr: str) -> np.ndarray:
        n = int(round(day_seconds * rate))
        t = day_start + np.arange(n) / rate
        seg_idx = np.minimum((t - day_start) // seg_len, len(states) - 1).astype(int)
        values = np.asarray([getattr(params[label], attr) for label in states])
        return values[seg_idx]

    # Heart rate @ 1 Hz
    n_hr = int(round(day_seconds * HR_RATE))
    hr = per_sample_params(HR_RATE, "hr_baseline") + per_sample_params(
        HR_RATE, "hr_sd"
    ) * rng.standard_normal(n_hr)
    hr = np.maximum(hr, 30.0)

    # Temperature @ 4 Hz
    n_temp = int(round(day_seconds * TEMP_RATE))
    temp = per_sample_params(TEMP_RATE, "temp_mean") + 0.05 * rng.standard_normal(n_temp)

    # EDA @ 4 Hz: tonic level plus Poisson-timed bumps
    n_eda = int(round(day_seconds * EDA_RATE))
    eda = per_sample_params(EDA_RATE, "eda_tonic") + 0.01 * rng.standard_normal(n_eda)
    for seg in timeline:
        p = params[seg.mood]
        minutes = (seg.right - seg.left) / 60.0
        n_events = rng.poisson(p.scr_rate * minutes)
        if n_events == 0 or p.scr_amplitude <= 0:
            continue
        kernel = _scr_kernel(EDA_RATE, p.scr_amplitude)
        offsets = np.sort(rng.uniform(seg.left, seg.right, size=n_events))
        for t0 in offsets:
            i0 = int(round((t0 - day_start) * EDA_RATE))
            i1 = min(i0 + kernel.size, n_eda)
            if i0 < n_eda:
                eda[i0:i1] += kernel[: i1 - i0]
    eda = np.maximum(eda, 0.0)

    # Accelerometer @ 32 Hz: gravity on z plus state-scaled jitter, raw 1/64 g ints
    n_acc = int(round(day_seconds * ACC_RATE))
    sd = np.sqrt(per_sample_params(ACC_RATE, "acc_activity"))
    acc = {
        axis: np.round(base + sd * rng.standard_normal(n_acc))
        for axis, base in (("x", 0.0), ("y", 0.0), ("z", 64.0))
    }

    # EMA prompts evenly spread, answered with a random delay
    emas: list[EmaEntry] = []
    spacing = day_seconds / (prompts_per_day + 1)
    for k in range(prompts_per_day):
        scheduled = day_start + (k + 1) * spacing
        max_delay = min(ANSWER_DELAY_MAX_S, day_end - scheduled - 1.0)
        answered = scheduled + rng.uniform(0.0, max(max_delay, 0.0))
        mood = _state_at(timeline, answered)
        pairs = _LIKERT_PAIRS[mood]
        h, a = pairs[int(rng.integers(len(pairs)))]
        emas.append(
            EmaEntry(
                scheduled_at=round(scheduled, 3),
                answered_at=round(answered, 3),
                happiness=h,
                activeness=a,
            )
        )

    channels = {
        ChannelKind.ACC_X: ChannelSeries(ChannelKind.ACC_X, day_start, ACC_RATE, tuple(acc["x"])),
        ChannelKind.ACC_Y: ChannelSeries(ChannelKind.ACC_Y, day_start, ACC_RATE, tuple(acc["y"])),
        ChannelKind.ACC_Z: ChannelSeries(ChannelKind.ACC_Z, day_start, ACC_RATE, tuple(acc["z"])),
        ChannelKind.TEMP: ChannelSeries(ChannelKind.TEMP, day_start, TEMP_RATE, tuple(temp)),
        ChannelKind.EDA: ChannelSeries(ChannelKind.EDA, day_start, EDA_RATE, tuple(eda)),
        ChannelKind.HR: ChannelSeries(ChannelKind.HR, day_start, HR_RATE, tuple(hr)),
    }
    recording = SessionRecording(
        channels=channels,
        session_id=session_id,
        day=dt.datetime.fromtimestamp(day_start, ZoneInfo("UTC")).date(),
    )
    return SynthDay(recording=recording, emas=emas, timeline=timeline)


def markov_state_sequence(
    labels: list[MoodLabel],
    transition: np.ndarray,
    n_segments: int,
    seed: int,
) -> list[MoodLabel]:
    """State sequence drawn from a Markov chain over ``labels``."""
    transition = np.asarray(transition, dtype=float)
    if transition.shape != (len(labels), len(labels)):
        raise ValueError("transition matrix shape mismatch")
    rng = np.random.default_rng([seed])
    state = int(rng.integers(len(labels)))
    out = [labels[state]]
    for _ in range(n_segments - 1):
        state = int(rng.choice(len(labels), p=transition[state]))
        out.append(labels[state])
    return out


def generate_study(
    out_dir: str | Path,
    days: int = 15,
    profile: MoodProfile | None = None,
    states: list[MoodLabel] | list[list[MoodLabel]] | None = None,
    seed: int = 0,
    start_date: dt.date = dt.date(2019, 4, 1),
    day_start_hour: float = 9.0,
    day_seconds: float = 8 * 3600.0,
    prompts_per_day: int = 5,
) -> list[SynthDay]:
    """Write ``days`` session directories plus ``ema.jsonl`` and ``truth.json``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profile = profile or default_profile()
    if states is None:
        states = list(profile.states)
    per_day: list[list[MoodLabel]]
    if states and isinstance(states[0], MoodLabel):
        per_day = [list(states)] * days
    else:
        if len(states) != days:
            raise ValueError("per-day state sequences must match the day count")
        per_day = [list(s) for s in states]

    tz = ZoneInfo("UTC")
    results: list[SynthDay] = []
    all_emas: list[EmaEntry] = []
    truth: list[dict] = []
    for d in range(days):
        date = start_date + dt.timedelta(days=d)
        day_start = dt.datetime(
            date.year, date.month, date.day, tzinfo=tz
        ).timestamp() + day_start_hour * 3600.0
        name = f"day_{d + 1:02d}"
        day = generate_day(
            profile,
            per_day[d],
            seed=int(np.random.SeedSequence([seed, d]).generate_state(1)[0]),
            day_start=day_start,
            day_seconds=day_seconds,
            prompts_per_day=prompts_per_day,
            session_id=name,
        )
        write_session(out_dir / name, day.recording)
        all_emas.extend(day.emas)
        truth.append(
            {
                "day": date.isoformat(),
                "session": name,
                "segments": [
                    {"left": seg.left, "right": seg.right, "mood": seg.mood.value}
                    for seg in day.timeline
                ],
            }
        )
        results.append(day)

    all_emas.sort(key=lambda e: e.answered_at)
    write_ema_log(out_dir / "ema.jsonl", all_emas)
    (out_dir / "truth.json").write_text(json.dumps({"days": truth}, indent=2) + "\n")
    return results
