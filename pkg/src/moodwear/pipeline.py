"""Glue between the stages: study loading, per-day extraction, labeling."""

from __future__ import annotations

import datetime as dt
import logging
from dataclasses import dataclass
from pathlib import Path

from .config import RunConfig
from .features import FeatureWindow, extract_all
from .groundtruth import (
    LabeledExample,
    extend_emas,
    filter_rare_classes,
    label_windows,
)
from .ingest import (
    REQUIRED_FILES,
    DayBundle,
    EmaEntry,
    parse_ema_log,
    parse_session,
    split_days,
)
from .preprocess import preprocess_session

log = logging.getLogger(__name__)

EMA_LOG_NAME = "ema.jsonl"


@dataclass
class DayData:
    """One day's extracted feature windows plus its EMAs and coverage span."""

    day: dt.date
    windows: list[FeatureWindow]
    emas: list[EmaEntry]
    span: tuple[float, float]


def find_session_dirs(data_dir: str | Path) -> list[Path]:
    data_dir = Path(data_dir)
    out = []
    for child in sorted(data_dir.iterdir()):
        if child.is_dir() and all((child / f).is_file() for f in REQUIRED_FILES):
            out.append(child)
    return out


def load_study(
    data_dir: str | Path,
    config: RunConfig,
    ema_log: str | Path | None = None,
) -> tuple[list[DayBundle], list[EmaEntry]]:
    """Parse every session directory plus the EMA log and split them by day."""
    data_dir = Path(data_dir)
    session_dirs = find_session_dirs(data_dir)
    if not session_dirs:
        raise FileNotFoundError(f"no session directories under {data_dir}")
    tz = config.zoneinfo
    recordings = [parse_session(d, tz=tz) for d in session_dirs]
    ema_path = Path(ema_log) if ema_log else data_dir / EMA_LOG_NAME
    entries = parse_ema_log(ema_path) if ema_path.is_file() else []
    bundles, orphans = split_days(entries, recordings, tz=tz)
    if orphans:
        log.info("%d EMA entries fall on days without recordings", len(orphans))
    return bundles, orphans


def extract_day(bundle: DayBundle, config: RunConfig) -> DayData:
    pre = preprocess_session(bundle.recording, basal_seconds=config.basal_seconds)
    signals = pre.signals().values()
    span = (max(s.start for s in signals), min(s.end for s in signals))
    windows = extract_all(pre, window_s=config.window_seconds, overlap=config.overlap)
    return DayData(day=bundle.day, windows=windows, emas=bundle.emas, span=span)


def extract_study(bundles: list[DayBundle], config: RunConfig) -> list[DayData]:
    return [extract_day(b, config) for b in bundles]


def label_study(
    day_data: list[DayData],
    config: RunConfig,
    window_minutes: float | None = None,
) -> tuple[list[LabeledExample], list]:
    """Label every day's windows and apply rare-class filtering once globally."""
    w = config.ema_window_minutes if window_minutes is None else window_minutes
    labeled: list[LabeledExample] = []
    for day in day_data:
        intervals = extend_emas(day.emas, w, day.span)
        labeled.extend(label_windows(day.windows, intervals, day=day.day))
    return filter_rare_classes(labeled, config.min_class_fraction)


def build_labeled_dataset(
    data_dir: str | Path,
    config: RunConfig,
    ema_log: str | Path | None = None,
) -> tuple[list[LabeledExample], list]:
    bundles, _ = load_study(data_dir, config, ema_log=ema_log)
    day_data = extract_study(bundles, config)
    return label_study(day_data, config)
