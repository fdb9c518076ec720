"""Signal synthesis and ground-truth support."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mwcsense import (
    BandSpec,
    InvalidArgument,
    InvalidScenario,
    SignalScenario,
    nyquist_rate,
    synthesize,
    tone_scenario,
    true_support,
    validate_scenario,
)


def scenario_of(bands, f_max=1e9, duration_s=1e-5, seed=0, snr_db=None, n_max=None):
    return SignalScenario(
        f_max=f_max,
        n_bands_max=n_max if n_max is not None else 2 * max(len(bands), 1),
        band_width_max_hz=20e6,
        bands=tuple(bands),
        duration_s=duration_s,
        snr_db=snr_db,
        seed=seed,
    )


def test_nyquist_rate_values():
    assert nyquist_rate(1e9) == 2e9
    assert nyquist_rate(0.5) == 1.0
    assert nyquist_rate(550e6) == pytest.approx(1.1e9)


def test_nyquist_rate_rejects_nonpositive():
    with pytest.raises(InvalidArgument):
        nyquist_rate(0.0)
    with pytest.raises(InvalidArgument):
        nyquist_rate(-1.0)


def test_empty_scenario_is_silent():
    x = synthesize(scenario_of([]), 2.5e9)
    assert x.samples.shape[0] > 0
    assert not x.samples.any()


def test_sine_peak_lands_on_carrier():
    scen = scenario_of([BandSpec(carrier_hz=500e6)], duration_s=4e-6)
    x = synthesize(scen, 4e9)
    spec = np.abs(np.fft.rfft(x.samples))
    freqs = np.fft.rfftfreq(x.samples.size, 1.0 / x.sample_rate_hz)
    peak = freqs[np.argmax(spec)]
    bin_hz = freqs[1] - freqs[0]
    assert abs(peak - 500e6) <= bin_hz


def test_am_sidebands():
    # 100 kHz envelope puts lines at the carrier and carrier +- 100 kHz
    band = BandSpec(
        carrier_hz=807.8e6,
        bandwidth_hz=0.4e6,
        modulation="am",
        mod_params={"envelope_rate_hz": 100e3, "depth": 0.5},
    )
    scen = scenario_of([band], duration_s=2e-4)
    x = synthesize(scen, 2.16e9)
    spec = np.abs(np.fft.rfft(x.samples))
    freqs = np.fft.rfftfreq(x.samples.size, 1.0 / x.sample_rate_hz)
    floor = spec.max() * 1e-3
    lines = freqs[spec > floor]
    for target in (807.8e6, 807.7e6, 807.9e6):
        assert np.min(np.abs(lines - target)) < 2 * (freqs[1] - freqs[0])


def test_true_support_empty():
    assert true_support(scenario_of([]), 20e6, 55).indices == ()


def test_true_support_single_tone():
    scen = scenario_of([BandSpec(carrier_hz=400e6)])
    assert true_support(scen, 20e6, 55).indices == (-20, 20)


def test_true_support_narrow_band_single_slice():
    # 631.2 MHz +- 1.5 MHz sits inside [630, 650) MHz, slice 32 only
    band = BandSpec(carrier_hz=631.2e6, bandwidth_hz=3e6)
    scen = scenario_of([band])
    assert true_support(scen, 20e6, 55).indices == (-32, 32)


def test_band_beyond_f_max_rejected():
    with pytest.raises(InvalidScenario):
        validate_scenario(scenario_of([BandSpec(carrier_hz=1.2e9)], f_max=1e9))


def test_band_budget_counts_signed_intervals():
    bands = [BandSpec(carrier_hz=f) for f in (200e6, 400e6, 600e6)]
    with pytest.raises(InvalidScenario):
        validate_scenario(scenario_of(bands, n_max=5))
    validate_scenario(scenario_of(bands, n_max=6))


def test_subnyquist_grid_rejected():
    scen = scenario_of([BandSpec(carrier_hz=400e6)])
    with pytest.raises(InvalidArgument):
        synthesize(scen, 1.9e9)


def test_synthesis_deterministic():
    scen = scenario_of([BandSpec(carrier_hz=321e6)], seed=11)
    a = synthesize(scen, 2.5e9)
    b = synthesize(scen, 2.5e9)
    assert np.array_equal(a.samples, b.samples)


carrier = st.integers(min_value=5, max_value=95).map(lambda k: k * 1e7)


@given(f1=carrier, f2=carrier)
def test_synthesis_is_linear(f1, f2):
    if f1 == f2:
        f2 = f1 + 1e7
    one = scenario_of([BandSpec(carrier_hz=f1)], duration_s=2e-6, seed=4)
    two = scenario_of([BandSpec(carrier_hz=f2)], duration_s=2e-6, seed=4)
    both = scenario_of(
        [BandSpec(carrier_hz=f1), BandSpec(carrier_hz=f2)], duration_s=2e-6, seed=4
    )
    xs = synthesize(one, 2.5e9).samples + synthesize(two, 2.5e9).samples
    np.testing.assert_allclose(synthesize(both, 2.5e9).samples, xs, atol=1e-12)


@given(
    carriers=st.lists(carrier, min_size=1, max_size=3, unique=True),
    width=st.sampled_from([0.0, 2e6, 8e6]),
)
def test_true_support_is_conjugate_symmetric(carriers, width):
    bands = [BandSpec(carrier_hz=f, bandwidth_hz=width) for f in carriers]
    sup = true_support(scenario_of(bands), 20e6, 55).indices
    assert sorted(-l for l in sup) == list(sup)


def test_requested_snr_is_delivered():
    # 10 ms of signal keeps the periodogram estimate tight
    scen = tone_scenario(20e6, f_max=50e6, duration_s=10e-3, seed=2, snr_db=18.0)
    x = synthesize(scen, 110e6)
    clean = synthesize(
        tone_scenario(20e6, f_max=50e6, duration_s=10e-3, seed=2), 110e6
    )
    noise = x.samples - clean.samples
    measured = 10 * np.log10(
        np.mean(clean.samples**2) / np.mean(noise**2)
    )
    assert abs(measured - 18.0) < 0.5
