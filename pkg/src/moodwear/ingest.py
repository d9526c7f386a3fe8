"""Parsing of wristband session directories and EMA logs.

Session directory layout (one text file per channel):

* row 1: start unix timestamp (``ACC.csv`` repeats it once per column),
* row 2: sample rate in Hz (same repetition rule),
* rows 3..: one sample per row (``ACC.csv``: ``x,y,z``).

``IBI.csv`` deviates: row 1 is the start timestamp, remaining rows are
``offset_seconds,duration_seconds`` pairs. It is parsed and retained but not
used by the feature pipeline.

EMA logs are newline-delimited JSON records with fields ``scheduled_at``,
``answered_at`` (unix seconds) and ``happiness``, ``activeness`` (0..4).
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from zoneinfo import ZoneInfo


class ChannelKind(Enum):
    ACC_X = "acc_x"
    ACC_Y = "acc_y"
    ACC_Z = "acc_z"
    TEMP = "temp"
    EDA = "eda"
    HR = "hr"
    BVP = "bvp"


REQUIRED_KINDS = (
    ChannelKind.ACC_X,
    ChannelKind.ACC_Y,
    ChannelKind.ACC_Z,
    ChannelKind.TEMP,
    ChannelKind.EDA,
    ChannelKind.HR,
)

REQUIRED_FILES = ("ACC.csv", "TEMP.csv", "EDA.csv", "HR.csv")
OPTIONAL_FILES = ("BVP.csv", "IBI.csv")


class IngestError(ValueError):
    """Base class for session/EMA parsing failures."""


class MissingChannelError(IngestError):
    def __init__(self, filename: str) -> None:
        super().__init__(f"required channel file missing: {filename}")
        self.filename = filename


class MalformedFileError(IngestError):
    def __init__(self, filename: str, line_no: int, detail: str) -> None:
        super().__init__(f"{filename}:{line_no}: {detail}")
        self.filename = filename
        self.line_no = line_no


class LikertOutOfRangeError(IngestError):
    pass


class DuplicateEntryError(IngestError):
    pass


@dataclass(frozen=True)
class ChannelSeries:
    """One uniformly sampled channel; t_i = start_time + i / sample_rate."""

    kind: ChannelKind
    start_time: float
    sample_rate: float
    samples: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise IngestError(f"{self.kind.value}: sample_rate must be positive")
        if not self.samples:
            raise IngestError(f"{self.kind.value}: empty channel")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration


@dataclass(frozen=True)
class IbiSeries:
    """Inter-beat events as (offset_seconds, duration_seconds); retained, unused."""

    start_time: float
    events: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class SessionRecording:
    channels: dict[ChannelKind, ChannelSeries]
    session_id: str
    day: dt.date
    ibi: IbiSeries | None = None

    @property
    def earliest_start(self) -> float:
        return min(c.start_time for c in self.channels.values())

    def day_for(self, tz: ZoneInfo) -> dt.date:
        return dt.datetime.fromtimestamp(self.earliest_start, tz).date()


@dataclass(frozen=True)
class EmaEntry:
    scheduled_at: float
    answered_at: float
    happiness: int
    activeness: int

    def __post_init__(self) -> None:
        for name in ("happiness", "activeness"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise IngestError(f"{name} must be an integer, got {value!r}")
            if not 0 <= value <= 4:
                raise LikertOutOfRangeError(f"{name}={value} outside 0..4")


@dataclass
class DayBundle:
    day: dt.date
    recording: SessionRecording
    emas: list[EmaEntry] = field(default_factory=list)


def _read_rows(path: Path) -> list[str]:
    return [line for line in path.read_text().splitlines() if line.strip()]


def _parse_header_value(filename: str, row: str, line_no: int, columns: int) -> float:
    parts = [p.strip() for p in row.split(",")]
    if len(parts) != columns:
        raise MalformedFileError(
            filename, line_no, f"expected {columns} header column(s), got {len(parts)}"
        )
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise MalformedFileError(filename, line_no, f"non-numeric header: {row!r}") from None
    if any(v != values[0] for v in values):
        raise MalformedFileError(filename, line_no, f"header columns disagree: {row!r}")
    return values[0]


def _parse_single_channel(path: Path, kind: ChannelKind) -> ChannelSeries:
    rows = _read_rows(path)
    if len(rows) < 3:
        raise MalformedFileError(path.name, len(rows), "need start row, rate row and data")
    start = _parse_header_value(path.name, rows[0], 1, 1)
    rate = _parse_header_value(path.name, rows[1], 2, 1)
    samples = []
    for i, row in enumerate(rows[2:], start=3):
        try:
            samples.append(float(row))
        except ValueError:
            raise MalformedFileError(path.name, i, f"non-numeric sample: {row!r}") from None
    return ChannelSeries(kind, start, rate, tuple(samples))


def _parse_acc(path: Path) -> tuple[ChannelSeries, ChannelSeries, ChannelSeries]:
    rows = _read_rows(path)
    if len(rows) < 3:
        raise MalformedFileError(path.name, len(rows), "need start row, rate row and data")
    start = _parse_header_value(path.name, rows[0], 1, 3)
    rate = _parse_header_value(path.name, rows[1], 2, 3)
    xs: list[float] = []
    ys: list[float] = []
    zs: list[float] = []
    for i, row in enumerate(rows[2:], start=3):
        parts = row.split(",")
        if len(parts) != 3:
            raise MalformedFileError(path.name, i, f"expected 3 columns, got {len(parts)}")
        try:
            x, y, z = (float(p) for p in parts)
        except ValueError:
            raise MalformedFileError(path.name, i, f"non-numeric sample: {row!r}") from None
        xs.append(x)
        ys.append(y)
        zs.append(z)
    return (
        ChannelSeries(ChannelKind.ACC_X, start, rate, tuple(xs)),
        ChannelSeries(ChannelKind.ACC_Y, start, rate, tuple(ys)),
        ChannelSeries(ChannelKind.ACC_Z, start, rate, tuple(zs)),
    )


def _parse_ibi(path: Path) -> IbiSeries:
    rows = _read_rows(path)
    if not rows:
        raise MalformedFileError(path.name, 0, "empty file")
    start = _parse_header_value(path.name, rows[0], 1, 1)
    events = []
    for i, row in enumerate(rows[1:], start=2):
        parts = row.split(",")
        if len(parts) != 2:
            raise MalformedFileError(path.name, i, f"expected 2 columns, got {len(parts)}")
        try:
            events.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise MalformedFileError(path.name, i, f"non-numeric event: {row!r}") from None
    return IbiSeries(start, tuple(events))


def parse_session(dir_path: str | Path, tz: ZoneInfo | None = None) -> SessionRecording:
    """Parse one session directory into a validated recording.

    Per-file start timestamps and rates are trusted as written: channels of
    one session may start at different times (HR typically starts late).
    """
    dir_path = Path(dir_path)
    if not dir_path.is_dir():
        raise FileNotFoundError(f"not a session directory: {dir_path}")
    for filename in REQUIRED_FILES:
        if not (dir_path / filename).is_file():
            raise MissingChannelError(filename)

    acc_x, acc_y, acc_z = _parse_acc(dir_path / "ACC.csv")
    channels = {
        ChannelKind.ACC_X: acc_x,
        ChannelKind.ACC_Y: acc_y,
        ChannelKind.ACC_Z: acc_z,
        ChannelKind.TEMP: _parse_single_channel(dir_path / "TEMP.csv", ChannelKind.TEMP),
        ChannelKind.EDA: _parse_single_channel(dir_path / "EDA.csv", ChannelKind.EDA),
        ChannelKind.HR: _parse_single_channel(dir_path / "HR.csv", ChannelKind.HR),
    }
    if (dir_path / "BVP.csv").is_file():
        channels[ChannelKind.BVP] = _parse_single_channel(dir_path / "BVP.csv", ChannelKind.BVP)
    ibi = _parse_ibi(dir_path / "IBI.csv") if (dir_path / "IBI.csv").is_file() else None

    tz = tz or ZoneInfo("UTC")
    earliest = min(c.start_time for c in channels.values())
    return SessionRecording(
        channels=channels,
        session_id=dir_path.name,
        day=dt.datetime.fromtimestamp(earliest, tz).date(),
        ibi=ibi,
    )


def _fmt(value: float) -> str:
    # repr of a Python float round-trips exactly; also normalizes numpy scalars
    return repr(float(value))


def write_session(dir_path: str | Path, recording: SessionRecording) -> None:
    """Serialize a recording back to the session directory format."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)

    acc_x = recording.channels[ChannelKind.ACC_X]
    acc_y = recording.channels[ChannelKind.ACC_Y]
    acc_z = recording.channels[ChannelKind.ACC_Z]
    lines = [
        ",".join([_fmt(acc_x.start_time)] * 3),
        ",".join([_fmt(acc_x.sample_rate)] * 3),
    ]
    lines += [
        f"{_fmt(x)},{_fmt(y)},{_fmt(z)}"
        for x, y, z in zip(acc_x.samples, acc_y.samples, acc_z.samples)
    ]
    (dir_path / "ACC.csv").write_text("\n".join(lines) + "\n")

    single = {
        "TEMP.csv": ChannelKind.TEMP,
        "EDA.csv": ChannelKind.EDA,
        "HR.csv": ChannelKind.HR,
        "BVP.csv": ChannelKind.BVP,
    }
    for filename, kind in single.items():
        channel = recording.channels.get(kind)
        if channel is None:
            continue
        rows = [_fmt(channel.start_time), _fmt(channel.sample_rate)]
        rows += [_fmt(v) for v in channel.samples]
        (dir_path / filename).write_text("\n".join(rows) + "\n")

    if recording.ibi is not None:
        rows = [_fmt(recording.ibi.start_time)]
        rows += [f"{_fmt(off)},{_fmt(dur)}" for off, dur in recording.ibi.events]
        (dir_path / "IBI.csv").write_text("\n".join(rows) + "\n")


_EMA_FIELDS = ("scheduled_at", "answered_at", "happiness", "activeness")


def parse_ema_log(path: str | Path) -> list[EmaEntry]:
    """Parse an EMA log; entries come back sorted by answered_at, duplicates rejected."""
    path = Path(path)
    entries: list[EmaEntry] = []
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedFileError(path.name, line_no, f"invalid record: {exc}") from None
        if not isinstance(record, dict):
            raise MalformedFileError(path.name, line_no, "record is not an object")
        missing = [f for f in _EMA_FIELDS if f not in record]
        if missing:
            raise MalformedFileError(path.name, line_no, f"missing field(s): {', '.join(missing)}")
        entries.append(
            EmaEntry(
                scheduled_at=float(record["scheduled_at"]),
                answered_at=float(record["answered_at"]),
                happiness=record["happiness"],
                activeness=record["activeness"],
            )
        )
    entries.sort(key=lambda e: e.answered_at)
    for a, b in zip(entries, entries[1:]):
        if a.answered_at == b.answered_at:
            raise DuplicateEntryError(f"duplicate answered_at: {a.answered_at}")
    return entries


def ema_to_json(entry: EmaEntry) -> str:
    return json.dumps(
        {
            "scheduled_at": entry.scheduled_at,
            "answered_at": entry.answered_at,
            "happiness": entry.happiness,
            "activeness": entry.activeness,
        }
    )


def write_ema_log(path: str | Path, entries: list[EmaEntry]) -> None:
    Path(path).write_text("".join(ema_to_json(e) + "\n" for e in entries))


def split_days(
    entries: list[EmaEntry],
    recordings: list[SessionRecording],
    tz: ZoneInfo | None = None,
) -> tuple[list[DayBundle], list[EmaEntry]]:
    """Group recordings and EMAs by calendar day in the given time zone.

    Returns the day bundles sorted by date plus the orphan EMAs whose
    answered_at falls on a day with no recording.
    """
    tz = tz or ZoneInfo("UTC")
    bundles: dict[dt.date, DayBundle] = {}
    for recording in recordings:
        day = recording.day_for(tz)
        if day in bundles:
            raise IngestError(f"two recordings share the calendar day {day}")
        bundles[day] = DayBundle(day=day, recording=recording)

    orphans: list[EmaEntry] = []
    for entry in entries:
        day = dt.datetime.fromtimestamp(entry.answered_at, tz).date()
        bundle = bundles.get(day)
        if bundle is None:
            orphans.append(entry)
        else:
            bundle.emas.append(entry)

    ordered = [bundles[day] for day in sorted(bundles)]
    for bundle in ordered:
        bundle.emas.sort(key=lambda e: e.answered_at)
    return ordered, orphans
