"""Numeric kernels shared by the preprocessing and feature stages.

IIR Butterworth design/application (zero-phase), single-segment periodogram,
band power, spectral-edge percentiles, moving average and line fitting.
All functions are pure and reentrant.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import signal as _sig


class DegenerateSpectrumError(ValueError):
    """Spectral percentile requested on a spectrum with no non-DC power."""


class EmptyBandWarning(UserWarning):
    """Band power requested over a band containing no spectral bins."""


@dataclass(frozen=True)
class IirFilter:
    """Second-order-section cascade plus design metadata.

    ``sos`` rows are (b0, b1, b2, a0, a1, a2) with a0 normalized to 1.
    ``total_order`` counts poles: a lowpass keeps its prototype order, a
    bandpass doubles it.
    """

    sos: np.ndarray
    kind: str
    order: int
    cutoffs: tuple[float, ...]
    rate: float

    @property
    def total_order(self) -> int:
        return self.order if self.kind == "lowpass" else 2 * self.order

    @property
    def padlen(self) -> int:
        return 3 * self.total_order

    def gain_at(self, freqs_hz: np.ndarray | list[float]) -> np.ndarray:
        """Single-pass magnitude response |H(f)|."""
        _, h = _sig.sosfreqz(self.sos, worN=np.asarray(freqs_hz, dtype=float), fs=self.rate)
        return np.abs(h)

    def pole_magnitudes(self) -> np.ndarray:
        mags = []
        for section in self.sos:
            mags.extend(np.abs(np.roots([section[3], section[4], section[5]])))
        return np.asarray(mags)


def design_butterworth(
    kind: str,
    order: int,
    cutoffs: float | tuple[float, float],
    rate: float,
) -> IirFilter:
    """Design a maximally flat IIR filter as a stable SOS cascade.

    ``kind`` is "lowpass" or "bandpass"; ``cutoffs`` is one -3 dB frequency
    for a lowpass, a (low, high) pair for a bandpass. An order-n bandpass
    prototype yields 2n poles.
    """
    if order <= 0:
        raise ValueError("order must be positive")
    if kind not in ("lowpass", "bandpass"):
        raise ValueError(f"unsupported filter kind: {kind!r}")
    nyquist = rate / 2
    cut = (float(cutoffs),) if np.isscalar(cutoffs) else tuple(float(c) for c in cutoffs)
    if kind == "lowpass" and len(cut) != 1:
        raise ValueError("lowpass takes a single cutoff")
    if kind == "bandpass":
        if len(cut) != 2:
            raise ValueError("bandpass takes (low, high) cutoffs")
        if not cut[0] < cut[1]:
            raise ValueError("bandpass requires low < high")
    if any(not 0 < c < nyquist for c in cut):
        raise ValueError(f"cutoffs {cut} outside (0, Nyquist={nyquist})")

    sos = _sig.butter(order, cut if len(cut) > 1 else cut[0], btype=kind, fs=rate, output="sos")
    return IirFilter(sos=sos, kind=kind, order=order, cutoffs=cut, rate=rate)


def apply_zero_phase(filt: IirFilter, x: np.ndarray | list[float]) -> np.ndarray:
    """Forward-backward filtering with odd-reflection edge padding.

    Pads both ends by 3 × total filter order, seeds each pass with the
    steady-state step response so constants pass through exactly, and
    returns a signal of the input's length with zero net phase.
    """
    x = np.asarray(x, dtype=float)
    pad = filt.padlen
    if x.size <= pad:
        raise ValueError(f"signal length {x.size} too short for padding {pad}")

    ext = np.concatenate(
        [2 * x[0] - x[pad:0:-1], x, 2 * x[-1] - x[-2 : -pad - 2 : -1]]
    )
    zi = _sig.sosfilt_zi(filt.sos)
    fwd, _ = _sig.sosfilt(filt.sos, ext, zi=zi * ext[0])
    rev, _ = _sig.sosfilt(filt.sos, fwd[::-1], zi=zi * fwd[-1])
    return rev[::-1][pad : pad + x.size]


@dataclass(frozen=True)
class Psd:
    """One-sided power spectral density; Σ power·df equals the mean square."""

    freqs: np.ndarray
    power: np.ndarray
    df: float

    @property
    def nyquist(self) -> float:
        return self.df * (len(self.freqs) - 1) if len(self.freqs) else 0.0


def periodogram(x: np.ndarray | list[float], rate: float) -> Psd:
    """Rectangular-window one-sided periodogram of a real signal."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 8:
        raise ValueError("periodogram needs at least 8 samples")
    spectrum = np.fft.rfft(x)
    power = (np.abs(spectrum) ** 2) / (rate * n)
    power[1:] *= 2.0
    if n % 2 == 0:
        power[-1] /= 2.0  # Nyquist bin is not mirrored
    freqs = np.fft.rfftfreq(n, d=1.0 / rate)
    return Psd(freqs=freqs, power=power, df=rate / n)


def band_power(psd: Psd, lo: float, hi: float) -> float:
    """Integrated power over [lo, hi); the Nyquist bin counts when hi is Nyquist."""
    if not 0 <= lo < hi:
        raise ValueError(f"invalid band [{lo}, {hi})")
    mask = (psd.freqs >= lo) & (psd.freqs < hi)
    nyq = psd.freqs[-1]
    if np.isclose(hi, nyq) or hi > nyq:
        mask |= np.isclose(psd.freqs, nyq) & (psd.freqs >= lo)
    if not mask.any():
        warnings.warn(f"band [{lo}, {hi}) Hz contains no bins", EmptyBandWarning, stacklevel=2)
        return 0.0
    return float(np.sum(psd.power[mask]) * psd.df)


def band_bin_count(psd: Psd, lo: float, hi: float) -> int:
    return int(np.count_nonzero((psd.freqs >= lo) & (psd.freqs < hi)))


def spectral_edge(psd: Psd, fraction: float) -> float:
    """Smallest bin frequency where cumulative non-DC power reaches ``fraction``."""
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must lie in [0, 1]")
    cumulative = np.cumsum(psd.power[1:])
    total = float(cumulative[-1]) if cumulative.size else 0.0
    if total <= 0:
        raise DegenerateSpectrumError("no non-DC power in spectrum")
    idx = int(np.searchsorted(cumulative, fraction * total))
    idx = min(idx, cumulative.size - 1)
    return float(psd.freqs[1 + idx])


def moving_average(x: np.ndarray | list[float], width: int) -> np.ndarray:
    """Centered moving average; edge windows are truncated, length preserved."""
    x = np.asarray(x, dtype=float)
    if width < 1:
        raise ValueError("width must be >= 1")
    if width > x.size:
        raise ValueError(f"width {width} exceeds signal length {x.size}")
    if width == 1:
        return x.copy()
    half_left = (width - 1) // 2
    half_right = width // 2
    csum = np.concatenate([[0.0], np.cumsum(x)])
    idx = np.arange(x.size)
    lo = np.maximum(idx - half_left, 0)
    hi = np.minimum(idx + half_right, x.size - 1)
    return (csum[hi + 1] - csum[lo]) / (hi + 1 - lo)


def linfit(x: np.ndarray | list[float], rate: float) -> tuple[float, float]:
    """Least-squares line of sample value against seconds from window start."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 samples to fit a line")
    t = np.arange(x.size, dtype=float) / rate
    t_mean = t.mean()
    x_mean = x.mean()
    slope = float(np.sum((t - t_mean) * (x - x_mean)) / np.sum((t - t_mean) ** 2))
    return slope, float(x_mean - slope * t_mean)
