import numpy as np
import pytest

from moodwear import dsp


@pytest.fixture(scope="module")
def eda_lowpass():
    return dsp.design_butterworth("lowpass", 3, 1.5, 4.0)


@pytest.fixture(scope="module")
def acc_bandpass():
    return dsp.design_butterworth("bandpass", 3, (0.2, 10.0), 32.0)


class TestDesign:
    def test_lowpass_dc_gain(self, eda_lowpass):
        assert dsp.IirFilter.gain_at(eda_lowpass, [0.0])[0] == pytest.approx(1.0, abs=1e-9)

    def test_cutoff_gain_minus_3db(self, eda_lowpass, acc_bandpass):
        for filt, freqs in ((eda_lowpass, [1.5]), (acc_bandpass, [0.2, 10.0])):
            gains_db = 20 * np.log10(filt.gain_at(freqs))
            assert np.all(np.abs(gains_db - (-3.0103)) < 0.5)

    def test_bandpass_rejects_dc_and_nyquist(self, acc_bandpass):
        gains = acc_bandpass.gain_at([0.0, 16.0])
        assert gains[0] < 1e-3  # < -60 dB
        assert gains[1] < 1e-3

    def test_bandpass_order3_prototype_gives_6_poles(self, acc_bandpass):
        assert acc_bandpass.sos.shape == (3, 6)
        assert acc_bandpass.total_order == 6
        assert len(acc_bandpass.pole_magnitudes()) == 6

    def test_stability(self, eda_lowpass, acc_bandpass):
        for filt in (eda_lowpass, acc_bandpass, dsp.design_butterworth("lowpass", 2, 0.05, 4.0)):
            assert np.all(filt.pole_magnitudes() < 1 - 1e-8)

    def test_invalid_designs(self):
        with pytest.raises(ValueError):
            dsp.design_butterworth("lowpass", 3, 2.5, 4.0)  # >= Nyquist
        with pytest.raises(ValueError):
            dsp.design_butterworth("lowpass", 0, 1.0, 4.0)
        with pytest.raises(ValueError):
            dsp.design_butterworth("bandpass", 3, (10.0, 0.2), 32.0)


class TestZeroPhase:
    def test_constant_through_lowpass(self, eda_lowpass):
        x = np.full(200, 2.0)
        y = dsp.apply_zero_phase(eda_lowpass, x)
        assert np.max(np.abs(y - 2.0)) < 1e-9

    def test_constant_through_narrow_tonic_lowpass(self):
        filt = dsp.design_butterworth("lowpass", 2, 0.05, 4.0)
        y = dsp.apply_zero_phase(filt, np.full(400, 2.0))
        assert np.max(np.abs(y - 2.0)) < 1e-9

    def test_constant_through_bandpass(self, acc_bandpass):
        y = dsp.apply_zero_phase(acc_bandpass, np.full(512, 64.0))
        assert np.max(np.abs(y)) < 1e-6 * 64.0

    def test_sine_amplitude_preserved(self, acc_bandpass):
        t = np.arange(512) / 32.0
        x = np.sin(2 * np.pi * 1.0 * t)
        y = dsp.apply_zero_phase(acc_bandpass, x)
        # forward-backward pass applies |H|^2
        expected = float(acc_bandpass.gain_at([1.0])[0]) ** 2
        mid = y[156:356]
        assert np.max(np.abs(mid)) == pytest.approx(expected, rel=0.02)

    def test_output_length_and_short_signal(self, acc_bandpass):
        assert dsp.apply_zero_phase(acc_bandpass, np.ones(100)).size == 100
        with pytest.raises(ValueError):
            dsp.apply_zero_phase(acc_bandpass, np.ones(18))

    def test_zero_phase_no_lag(self, acc_bandpass, rng):
        # band-limited noise: cross-correlation peak must sit at lag 0
        x = dsp.apply_zero_phase(acc_bandpass, rng.standard_normal(1024))
        y = dsp.apply_zero_phase(acc_bandpass, x)
        xc = np.correlate(x - x.mean(), y - y.mean(), mode="full")
        assert int(np.argmax(xc)) == x.size - 1


class TestPeriodogram:
    def test_sine_parseval(self):
        n, rate = 64, 32.0
        x = np.sin(2 * np.pi * 1.0 * np.arange(n) / rate)
        psd = dsp.periodogram(x, rate)
        assert np.sum(psd.power) * psd.df == pytest.approx(np.mean(x**2), abs=1e-6)
        assert np.sum(psd.power) * psd.df == pytest.approx(0.5, abs=1e-6)

    def test_zero_signal(self):
        psd = dsp.periodogram(np.zeros(32), 4.0)
        assert np.all(psd.power == 0)

    def test_constant_concentrates_at_dc(self):
        c = 3.0
        psd = dsp.periodogram(np.full(32, c), 4.0)
        assert psd.power[0] * psd.df == pytest.approx(c**2, rel=1e-12)
        assert np.all(np.abs(psd.power[1:]) < 1e-12)

    def test_parseval_random(self, rng):
        for n in (31, 32, 64, 101):
            for _ in range(200):
                x = rng.standard_normal(n)
                rate = float(rng.uniform(0.5, 64))
                psd = dsp.periodogram(x, rate)
                assert np.sum(psd.power) * psd.df == pytest.approx(
                    np.mean(x**2), rel=1e-6
                )

    def test_too_short(self):
        with pytest.raises(ValueError):
            dsp.periodogram(np.ones(7), 4.0)


@pytest.fixture(scope="module")
def sine_psd():
    n, rate = 64, 32.0
    return dsp.periodogram(np.sin(2 * np.pi * np.arange(n) / rate), rate)


class TestBandPower:

    def test_band_around_tone(self, sine_psd):
        assert dsp.band_power(sine_psd, 0.9, 1.1) == pytest.approx(0.5, abs=1e-9)

    def test_empty_energy_band(self, sine_psd):
        assert dsp.band_power(sine_psd, 2.0, 3.0) == pytest.approx(0.0, abs=1e-12)

    def test_full_band_is_mean_square(self, sine_psd):
        assert dsp.band_power(sine_psd, 0.0, 16.0) == pytest.approx(0.5, abs=1e-9)

    def test_binless_band_warns_and_returns_zero(self, sine_psd):
        with pytest.warns(dsp.EmptyBandWarning):
            assert dsp.band_power(sine_psd, 0.01, 0.02) == 0.0


class TestSpectralEdge:
    def test_single_tone(self):
        psd = dsp.periodogram(np.sin(2 * np.pi * np.arange(64) / 32.0), 32.0)
        for f in (0.25, 0.5, 0.75):
            assert dsp.spectral_edge(psd, f) == pytest.approx(1.0)

    def test_two_equal_tones(self):
        t = np.arange(64) / 32.0
        x = np.sin(2 * np.pi * 1.0 * t) + np.sin(2 * np.pi * 4.0 * t)
        psd = dsp.periodogram(x, 32.0)
        assert dsp.spectral_edge(psd, 0.25) == pytest.approx(1.0)
        assert dsp.spectral_edge(psd, 0.75) == pytest.approx(4.0)

    def test_flat_spectrum_median(self):
        freqs = np.linspace(0, 16, 33)
        psd = dsp.Psd(freqs=freqs, power=np.ones(33), df=0.5)
        assert abs(dsp.spectral_edge(psd, 0.5) - 8.0) <= 0.5

    def test_monotone_in_fraction(self, rng):
        psd = dsp.periodogram(rng.standard_normal(128), 32.0)
        fractions = np.sort(rng.random(20))
        edges = [dsp.spectral_edge(psd, f) for f in fractions]
        assert all(a <= b for a, b in zip(edges, edges[1:]))

    def test_degenerate(self):
        psd = dsp.periodogram(np.full(32, 1.0), 4.0)
        with pytest.raises(dsp.DegenerateSpectrumError):
            dsp.spectral_edge(psd, 0.5)


class TestMovingAverageAndLinfit:
    def test_width_one_identity(self, rng):
        x = rng.standard_normal(10)
        assert np.array_equal(dsp.moving_average(x, 1), x)

    def test_constant(self):
        assert np.allclose(dsp.moving_average(np.full(9, 5.0), 4), 5.0)

    def test_truncated_edges(self):
        out = dsp.moving_average(np.array([0.0, 4.0, 0.0]), 3)
        assert out == pytest.approx([2.0, 4.0 / 3.0, 2.0])

    def test_width_errors(self):
        with pytest.raises(ValueError):
            dsp.moving_average(np.ones(3), 4)
        with pytest.raises(ValueError):
            dsp.moving_average(np.ones(3), 0)

    def test_exact_line(self):
        t = np.arange(20) / 4.0
        slope, intercept = dsp.linfit(2 * t + 1, 4.0)
        assert slope == pytest.approx(2.0, abs=1e-9)
        assert intercept == pytest.approx(1.0, abs=1e-9)

    def test_constant_line(self):
        slope, intercept = dsp.linfit(np.full(8, 3.25), 1.0)
        assert slope == pytest.approx(0.0, abs=1e-12)
        assert intercept == pytest.approx(3.25)

    def test_alternating(self):
        slope, intercept = dsp.linfit(np.array([0.0, 1.0, 0.0, 1.0]), 1.0)
        assert slope == pytest.approx(0.2)
        assert intercept == pytest.approx(0.2)
