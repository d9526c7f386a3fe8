"""Sliding-window feature extraction.

Every 60-second window yields a 203-entry vector: four accelerometer
signals (x, y, z, Euclidean norm) at 18 features each, skin temperature at
13, normalized heart rate at 27, and the electrodermal family (filtered
EDA, tonic, phasic) at 91. The registry freezes names, grouping and order;
degenerate statistics (zero-variance windows, empty bands) are emitted as 0
and flagged rather than as NaN.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dsp
from .preprocess import PreprocessedChannels, Signal

WINDOW_SECONDS = 60.0
WINDOW_OVERLAP = 0.10

HR_SMOOTH_WIDTH = 5  # samples @ 1 Hz
EDA_SMOOTH_WIDTH = 4  # samples @ 4 Hz

HRV_BANDS = {"vlf": (0.003, 0.04), "lf": (0.04, 0.15), "hf": (0.15, 0.4)}
EDA_BANDS = {"bp_010_020": (0.1, 0.2), "bp_020_030": (0.2, 0.3), "bp_030_040": (0.3, 0.4)}

ACC_SIGNALS = ("acc_x", "acc_y", "acc_z", "acc_norm")
EDA_SIGNALS = ("eda", "scl", "scr")

ACC_TIME = (
    "max", "p90", "var", "mad", "norm",
    "amp", "min", "std", "rms",
    "mavfd", "mavfdn", "mavsd", "mavsdn",
)
GENERIC_FREQ = ("spec_mean", "spec_std", "spec_p25", "spec_p50", "spec_p75")
TEMP_TIME = ("mean", "srl", "irl", "std", "mavfd", "mavfdn", "mavsd", "mavsdn")
HR_TIME = (
    "max", "p90", "var", "mad", "norm",
    "mean", "min", "std",
    "mavfd", "mavfdn", "mavsd", "mavsdn",
    "sm", "mfd",
)
HR_FREQ = (
    "avlf", "alf", "ahf", "atotal",
    "pvlf", "plf", "phf",
    "nlf", "nhf", "lfhf",
    "peak_vlf", "peak_lf", "peak_hf",
)
EDA_TIME = (
    "mean", "std", "max", "min", "dr",
    "fdm", "fdstd", "sdm", "sdstd",
    "al", "integral", "nap", "nrms", "apr", "epr",
    "cm", "skewness", "kurtosis",
    "mavfd", "mavfdn", "mavsd", "mavsdn",
)
EDA_FREQ = GENERIC_FREQ + tuple(EDA_BANDS)


@dataclass(frozen=True)
class FeatureSpec:
    index: int
    group: str  # acc | temp | hr | eda
    signal: str
    stat: str
    domain: str  # time | frequency

    @property
    def name(self) -> str:
        return f"{self.signal}_{self.stat}"


def _build_registry() -> tuple[FeatureSpec, ...]:
    specs: list[FeatureSpec] = []

    def add(group: str, signal: str, stats: tuple[str, ...], domain: str) -> None:
        for stat in stats:
            specs.append(FeatureSpec(len(specs), group, signal, stat, domain))

    for sig in ACC_SIGNALS:
        add("acc", sig, ACC_TIME, "time")
        add("acc", sig, GENERIC_FREQ, "frequency")
    add("temp", "temp", TEMP_TIME, "time")
    add("temp", "temp", GENERIC_FREQ, "frequency")
    add("hr", "hr", HR_TIME, "time")
    add("hr", "hr", HR_FREQ, "frequency")
    add("eda", "eda", EDA_TIME + ("smfd",), "time")
    add("eda", "scl", EDA_TIME, "time")
    add("eda", "scr", EDA_TIME, "time")
    for sig in EDA_SIGNALS:
        add("eda", sig, EDA_FREQ, "frequency")
    return tuple(specs)


REGISTRY: tuple[FeatureSpec, ...] = _build_registry()
FEATURE_NAMES: tuple[str, ...] = tuple(spec.name for spec in REGISTRY)
N_FEATURES = len(REGISTRY)


def registry_group_sizes() -> dict[str, int]:
    sizes: dict[str, int] = {}
    for spec in REGISTRY:
        sizes[spec.group] = sizes.get(spec.group, 0) + 1
    return sizes


@dataclass(frozen=True)
class FeatureWindow:
    """One window's feature vector plus validity/degeneracy bookkeeping."""

    start: float
    end: float
    values: np.ndarray
    valid: bool = True
    invalid_signals: tuple[str, ...] = ()
    degenerate: tuple[str, ...] = field(default=(), repr=False)

    @property
    def midpoint(self) -> float:
        return (self.start + self.end) / 2.0


def iter_windows(
    channel_start: float,
    channel_end: float,
    window_s: float = WINDOW_SECONDS,
    overlap: float = WINDOW_OVERLAP,
) -> list[tuple[float, float]]:
    """Window bounds starting at channel_start every window_s·(1−overlap) seconds."""
    if window_s <= 0:
        raise ValueError("window_s must be positive")
    if not 0 <= overlap < 1:
        raise ValueError("overlap must lie in [0, 1)")
    hop = window_s * (1.0 - overlap)
    bounds: list[tuple[float, float]] = []
    k = 0
    while True:
        start = channel_start + k * hop
        if start + window_s > channel_end + 1e-9:
            return bounds
        bounds.append((start, start + window_s))
        k += 1


def _time_block(
    x: np.ndarray, rate: float, names: tuple[str, ...], smooth_width: int | None
) -> tuple[list[float], list[str]]:
    n = x.size
    mean = float(np.mean(x))
    dev = x - mean
    var = float(np.mean(dev**2))
    std = float(np.sqrt(var))
    d1 = np.diff(x)
    d2 = np.diff(x, 2)
    sumsq = float(np.sum(x**2))
    arc = float(np.sum(np.sqrt(1.0 + d1**2)))
    integral = float(np.sum(x)) / rate
    z_d1 = z_d2 = None
    if std > 0:
        z = dev / std
        z_d1 = np.diff(z)
        z_d2 = np.diff(z, 2)
    smooth = dsp.moving_average(x, smooth_width) if smooth_width else None

    values: list[float] = []
    degenerate: list[str] = []
    for name in names:
        flag = False
        if name == "max":
            v = float(np.max(x))
        elif name == "min":
            v = float(np.min(x))
        elif name == "mean":
            v = mean
        elif name in ("amp", "dr"):
            v = float(np.max(x) - np.min(x))
        elif name == "var":
            v = var
        elif name == "std":
            v = std
        elif name == "rms":
            v = float(np.sqrt(sumsq / n))
        elif name == "p90":
            v = float(np.percentile(x, 90))
        elif name == "mad":
            v = float(np.mean(np.abs(dev)))
        elif name == "norm":
            v = float(np.sqrt(sumsq))
        elif name == "mavfd":
            v = float(np.mean(np.abs(d1)))
        elif name == "mavfdn":
            flag = std == 0
            v = 0.0 if flag else float(np.mean(np.abs(z_d1)))
        elif name == "mavsd":
            v = float(np.mean(np.abs(d2)))
        elif name == "mavsdn":
            flag = std == 0
            v = 0.0 if flag else float(np.mean(np.abs(z_d2)))
        elif name == "fdm":
            v = float(np.mean(d1 * rate))
        elif name == "fdstd":
            v = float(np.std(d1 * rate))
        elif name == "sdm":
            v = float(np.mean(d2 * rate * rate))
        elif name == "sdstd":
            v = float(np.std(d2 * rate * rate))
        elif name == "al":
            v = arc
        elif name == "integral":
            v = integral
        elif name == "nap":
            v = sumsq / n
        elif name == "nrms":
            v = float(np.sqrt(sumsq / n))
        elif name == "apr":
            v = integral / arc
        elif name == "epr":
            v = sumsq / arc
        elif name == "cm":
            v = float(np.mean(dev**3))
        elif name == "skewness":
            flag = std == 0
            v = 0.0 if flag else float(np.mean(dev**3)) / std**3
        elif name == "kurtosis":
            flag = std == 0
            v = 0.0 if flag else float(np.mean(dev**4)) / std**4
        elif name == "srl":
            v = dsp.linfit(x, rate)[0]
        elif name == "irl":
            v = dsp.linfit(x, rate)[1]
        elif name == "sm":
            v = float(np.mean(smooth))
        elif name == "mfd":
            v = float(np.mean(d1))
        elif name == "smfd":
            v = float(np.mean(np.abs(np.diff(smooth))))
        else:
            raise KeyError(name)
        values.append(v)
        if flag:
            degenerate.append(name)
    return values, degenerate


def _spectral_percentiles(psd: dsp.Psd) -> tuple[list[float], bool]:
    try:
        return [dsp.spectral_edge(psd, f) for f in (0.25, 0.50, 0.75)], False
    except dsp.DegenerateSpectrumError:
        return [0.0, 0.0, 0.0], True


def _banded_power(psd: dsp.Psd, lo: float, hi: float) -> tuple[float, bool]:
    if dsp.band_bin_count(psd, lo, hi) == 0:
        return 0.0, True
    return dsp.band_power(psd, lo, hi), False


def _band_peak(psd: dsp.Psd, lo: float, hi: float) -> tuple[float, bool]:
    mask = (psd.freqs >= lo) & (psd.freqs < hi)
    if not mask.any():
        return 0.0, True
    powers = psd.power[mask]
    best = int(np.argmax(powers))
    if powers[best] <= 0:
        return 0.0, True
    return float(psd.freqs[mask][best]), False


def _generic_freq_block(psd: dsp.Psd) -> tuple[list[float], list[str]]:
    tail = psd.power[1:]
    values = [float(np.mean(tail)), float(np.std(tail))]
    edges, degenerate = _spectral_percentiles(psd)
    values += edges
    return values, (["spec_p25", "spec_p50", "spec_p75"] if degenerate else [])


def _hr_freq_block(psd: dsp.Psd) -> tuple[list[float], list[str]]:
    powers: dict[str, float] = {}
    degenerate: list[str] = []
    for band, (lo, hi) in HRV_BANDS.items():
        powers[band], empty = _banded_power(psd, lo, hi)
        if empty:
            degenerate.append(f"a{band}")
    total = powers["vlf"] + powers["lf"] + powers["hf"]
    lf_hf = powers["lf"] + powers["hf"]

    values = [powers["vlf"], powers["lf"], powers["hf"], total]
    for band in ("vlf", "lf", "hf"):
        if total == 0:
            values.append(0.0)
            degenerate.append(f"p{band}")
        else:
            values.append(100.0 * powers[band] / total)
    for band in ("lf", "hf"):
        if lf_hf == 0:
            values.append(0.0)
            degenerate.append(f"n{band}")
        else:
            values.append(100.0 * powers[band] / lf_hf)
    if powers["hf"] == 0:
        values.append(0.0)
        degenerate.append("lfhf")
    else:
        values.append(powers["lf"] / powers["hf"])
    for band, (lo, hi) in HRV_BANDS.items():
        peak, flag = _band_peak(psd, lo, hi)
        values.append(peak)
        if flag:
            degenerate.append(f"peak_{band}")
    return values, degenerate


def feature_vector(
    segments: dict[str, np.ndarray], rates: dict[str, float]
) -> tuple[np.ndarray, tuple[str, ...]]:
    """Assemble the 203-entry vector in registry order from window segments."""
    values: list[float] = []
    degenerate: list[str] = []

    def extend(signal: str, vals: list[float], flags: list[str]) -> None:
        values.extend(vals)
        degenerate.extend(f"{signal}_{flag}" for flag in flags)

    for sig in ACC_SIGNALS:
        x, rate = np.asarray(segments[sig], dtype=float), rates[sig]
        extend(sig, *_time_block(x, rate, ACC_TIME, None))
        extend(sig, *_generic_freq_block(dsp.periodogram(x, rate)))

    x, rate = np.asarray(segments["temp"], dtype=float), rates["temp"]
    extend("temp", *_time_block(x, rate, TEMP_TIME, None))
    extend("temp", *_generic_freq_block(dsp.periodogram(x, rate)))

    x, rate = np.asarray(segments["hr"], dtype=float), rates["hr"]
    extend("hr", *_time_block(x, rate, HR_TIME, HR_SMOOTH_WIDTH))
    extend("hr", *_hr_freq_block(dsp.periodogram(x, rate)))

    for sig in EDA_SIGNALS:
        x, rate = np.asarray(segments[sig], dtype=float), rates[sig]
        names = EDA_TIME + ("smfd",) if sig == "eda" else EDA_TIME
        extend(sig, *_time_block(x, rate, names, EDA_SMOOTH_WIDTH))

    for sig in EDA_SIGNALS:
        x, rate = np.asarray(segments[sig], dtype=float), rates[sig]
        psd = dsp.periodogram(x, rate)
        vals, flags = _generic_freq_block(psd)
        for band_name, (lo, hi) in EDA_BANDS.items():
            power, empty = _banded_power(psd, lo, hi)
            vals.append(power)
            if empty:
                flags.append(band_name)
        extend(sig, vals, flags)

    vec = np.asarray(values, dtype=float)
    if vec.size != N_FEATURES:
        raise AssertionError(f"assembled {vec.size} features, registry holds {N_FEATURES}")
    return vec, tuple(degenerate)


def time_stat(name: str, x: np.ndarray, rate: float, smooth_width: int | None = None) -> float:
    """Single named time-domain statistic (test/inspection surface)."""
    values, _ = _time_block(np.asarray(x, dtype=float), rate, (name,), smooth_width)
    return values[0]


def _slice(signal: Signal, start: float, window_s: float) -> np.ndarray | None:
    i0 = int(round((start - signal.start) * signal.rate))
    count = int(round(window_s * signal.rate))
    if i0 < 0 or i0 + count > signal.values.size:
        return None
    return signal.values[i0 : i0 + count]


def extract(pre: PreprocessedChannels, start: float, end: float) -> FeatureWindow:
    """Feature vector for one window; incomplete channel coverage marks it invalid."""
    window_s = end - start
    segments: dict[str, np.ndarray] = {}
    rates: dict[str, float] = {}
    missing: list[str] = []
    for name, signal in pre.signals().items():
        seg = _slice(signal, start, window_s)
        if seg is None:
            missing.append(name)
        else:
            segments[name] = seg
            rates[name] = signal.rate
    if missing:
        return FeatureWindow(
            start=start,
            end=end,
            values=np.zeros(N_FEATURES),
            valid=False,
            invalid_signals=tuple(missing),
        )
    values, degenerate = feature_vector(segments, rates)
    return FeatureWindow(start=start, end=end, values=values, degenerate=degenerate)


def extract_all(
    pre: PreprocessedChannels,
    window_s: float = WINDOW_SECONDS,
    overlap: float = WINDOW_OVERLAP,
) -> list[FeatureWindow]:
    """All valid windows of a session, aligned to the latest-starting channel."""
    signals = pre.signals().values()
    span_start = max(s.start for s in signals)
    span_end = min(s.end for s in signals)
    windows = [
        extract(pre, start, end)
        for start, end in iter_windows(span_start, span_end, window_s, overlap)
    ]
    return [w for w in windows if w.valid]


def write_feature_table(path: str | Path, windows: list[FeatureWindow]) -> None:
    """CSV export: window_start, window_end, then the 203 registry columns."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("window_start", "window_end") + FEATURE_NAMES)
        for w in windows:
            if not w.valid:
                continue
            writer.writerow([repr(w.start), repr(w.end)] + [repr(float(v)) for v in w.values])


def read_feature_table(path: str | Path) -> list[FeatureWindow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        expected = ["window_start", "window_end"] + list(FEATURE_NAMES)
        if header != expected:
            raise ValueError(f"unexpected feature table header in {path}")
        out = []
        for row in reader:
            out.append(
                FeatureWindow(
                    start=float(row[0]),
                    end=float(row[1]),
                    values=np.asarray([float(v) for v in row[2:]], dtype=float),
                )
            )
        return out
