"""Channel conditioning ahead of feature extraction.

Accelerometer axes and their Euclidean norm are band-passed (0.2-10 Hz),
temperature jumps beyond 2 °C are held at the last valid value, heart rate
is divided by its basal (first ten minutes) mean, and electrodermal
activity is low-passed then split into tonic (SCL) and phasic (SCR) parts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import dsp
from ._kernels import temp_hold_scan
from .ingest import ChannelKind, SessionRecording

ACC_RATE = 32.0
TEMP_RATE = 4.0
EDA_RATE = 4.0
HR_RATE = 1.0

TEMP_JUMP_THRESHOLD_C = 2.0
BASAL_SECONDS = 600.0

_ACC_BAND = dsp.design_butterworth("bandpass", 3, (0.2, 10.0), ACC_RATE)
_EDA_LOWPASS = dsp.design_butterworth("lowpass", 3, 1.5, EDA_RATE)
_SCL_LOWPASS = dsp.design_butterworth("lowpass", 2, 0.05, EDA_RATE)


class PreprocessError(ValueError):
    pass


class ShortBasalWarning(UserWarning):
    """Recording shorter than the basal span; the whole series is basal."""


class NegativeEdaWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Signal:
    """A derived uniformly sampled signal (start time, rate, values)."""

    start: float
    rate: float
    values: np.ndarray

    @property
    def end(self) -> float:
        return self.start + self.values.size / self.rate


@dataclass(frozen=True)
class PreprocessedChannels:
    acc_x: Signal
    acc_y: Signal
    acc_z: Signal
    acc_norm: Signal
    temp: Signal
    hr_norm: Signal
    eda: Signal
    scl: Signal
    scr: Signal
    temp_discarded: int
    hr_basal_short: bool
    eda_had_negative: bool

    def signals(self) -> dict[str, Signal]:
        return {
            "acc_x": self.acc_x,
            "acc_y": self.acc_y,
            "acc_z": self.acc_z,
            "acc_norm": self.acc_norm,
            "temp": self.temp,
            "hr": self.hr_norm,
            "eda": self.eda,
            "scl": self.scl,
            "scr": self.scr,
        }


def acc_preprocess(
    acc_x: np.ndarray,
    acc_y: np.ndarray,
    acc_z: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Band-pass the three axes plus their Euclidean norm (computed pre-filter)."""
    acc_x = np.asarray(acc_x, dtype=float)
    acc_y = np.asarray(acc_y, dtype=float)
    acc_z = np.asarray(acc_z, dtype=float)
    if not (acc_x.size == acc_y.size == acc_z.size):
        raise PreprocessError("accelerometer axes have mismatched lengths")
    norm = np.sqrt(acc_x**2 + acc_y**2 + acc_z**2)
    return tuple(dsp.apply_zero_phase(_ACC_BAND, s) for s in (acc_x, acc_y, acc_z, norm))


def temp_clean(temp: np.ndarray) -> tuple[np.ndarray, int]:
    """Replace consecutive jumps beyond 2 °C with the last valid value."""
    return temp_hold_scan(np.asarray(temp, dtype=float), TEMP_JUMP_THRESHOLD_C)


def hr_normalize(
    hr: np.ndarray,
    rate: float = HR_RATE,
    basal_seconds: float = BASAL_SECONDS,
) -> tuple[np.ndarray, bool]:
    """Divide heart rate by the mean of its basal (first ten minutes) segment."""
    hr = np.asarray(hr, dtype=float)
    if hr.size == 0:
        raise PreprocessError("empty heart-rate series")
    target_n = int(round(basal_seconds * rate))
    basal_n = min(target_n, hr.size)
    short = hr.size < target_n
    if short:
        warnings.warn(
            "recording shorter than the basal span; whole series used as basal",
            ShortBasalWarning,
            stacklevel=2,
        )
    basal_mean = float(np.mean(hr[:basal_n]))
    if basal_mean <= 0:
        raise PreprocessError(f"basal heart-rate mean {basal_mean} is not positive")
    return hr / basal_mean, short


def eda_decompose(eda: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    """Low-pass EDA, then split into tonic (SCL) and phasic (SCR = filtered − SCL)."""
    eda = np.asarray(eda, dtype=float)
    had_negative = bool((eda < 0).any())
    if had_negative:
        warnings.warn("negative EDA values present", NegativeEdaWarning, stacklevel=2)
    filtered = dsp.apply_zero_phase(_EDA_LOWPASS, eda)
    scl = dsp.apply_zero_phase(_SCL_LOWPASS, filtered)
    scr = filtered - scl
    return filtered, scl, scr, had_negative


def preprocess_session(
    recording: SessionRecording,
    basal_seconds: float = BASAL_SECONDS,
) -> PreprocessedChannels:
    """Run all channel conditioning for one session."""
    chans = recording.channels
    acc_x = chans[ChannelKind.ACC_X]
    acc_y = chans[ChannelKind.ACC_Y]
    acc_z = chans[ChannelKind.ACC_Z]
    temp = chans[ChannelKind.TEMP]
    eda = chans[ChannelKind.EDA]
    hr = chans[ChannelKind.HR]

    fx, fy, fz, fnorm = acc_preprocess(
        np.asarray(acc_x.samples), np.asarray(acc_y.samples), np.asarray(acc_z.samples)
    )
    temp_values, discarded = temp_clean(np.asarray(temp.samples))
    hr_values, basal_short = hr_normalize(
        np.asarray(hr.samples), rate=hr.sample_rate, basal_seconds=basal_seconds
    )
    eda_filt, scl, scr, had_negative = eda_decompose(np.asarray(eda.samples))

    return PreprocessedChannels(
        acc_x=Signal(acc_x.start_time, acc_x.sample_rate, fx),
        acc_y=Signal(acc_y.start_time, acc_y.sample_rate, fy),
        acc_z=Signal(acc_z.start_time, acc_z.sample_rate, fz),
        acc_norm=Signal(acc_x.start_time, acc_x.sample_rate, fnorm),
        temp=Signal(temp.start_time, temp.sample_rate, temp_values),
        hr_norm=Signal(hr.start_time, hr.sample_rate, hr_values),
        eda=Signal(eda.start_time, eda.sample_rate, eda_filt),
        scl=Signal(eda.start_time, eda.sample_rate, scl),
        scr=Signal(eda.start_time, eda.sample_rate, scr),
        temp_discarded=discarded,
        hr_basal_short=basal_short,
        eda_had_negative=had_negative,
    )
