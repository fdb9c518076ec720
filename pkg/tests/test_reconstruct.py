"""Slice recovery, waveform rebuild, and carrier estimation."""

import numpy as np
import pytest

from mwcsense import (
    InvalidArgument,
    ReconstructionIllPosed,
    SampleMatrix,
    SupportSet,
    choose_grid_rate,
    estimate_carriers,
    reconstruct_signal,
    recover_slices,
    slice_oracle,
    synthesize,
    tone_scenario,
)
from conftest import rel_err


def test_recover_slices_consistent_system(matrix):
    rng = np.random.default_rng(3)
    support = SupportSet(indices=(-20, -5, 5, 20))
    cols = [l + matrix.L for l in support.indices]
    z = rng.standard_normal((4, 64)) + 1j * rng.standard_normal((4, 64))
    rows = matrix.entries[:, cols] @ z
    sm = SampleMatrix(rows=rows, f_p=20e6, m=4, q=3)
    got = recover_slices(sm, matrix, support)
    stacked = np.vstack([got[l] for l in support.indices])
    assert rel_err(stacked, z) < 1e-8


def test_recover_slices_requires_nonempty_support(matrix):
    sm = SampleMatrix(rows=np.zeros((12, 8), dtype=complex), f_p=20e6, m=4, q=3)
    with pytest.raises(InvalidArgument):
        recover_slices(sm, matrix, SupportSet(indices=()))


def test_recover_slices_oversize_support(matrix):
    sm = SampleMatrix(rows=np.zeros((12, 8), dtype=complex), f_p=20e6, m=4, q=3)
    too_many = SupportSet(indices=tuple(range(-6, 7)))
    with pytest.raises(ReconstructionIllPosed):
        recover_slices(sm, matrix, too_many)


def test_recovered_tone_slice_matches_oracle(tone_samples, matrix):
    _, samples, x = tone_samples
    support = SupportSet(indices=(-20, 20))
    got = recover_slices(samples.truncated(64), matrix, support)
    want = slice_oracle(x, 20e6, matrix.L, n_snapshots=64)
    assert rel_err(got[20], want[matrix.L + 20]) < 1e-3


def test_reconstruct_empty_support_is_silent():
    out = reconstruct_signal({}, SupportSet(indices=()), 20e6, 2.5e9, 1e-5)
    assert not out.samples.any()


def tone_slices(carrier_hz, duration_s=2e-5, amplitude=1.0):
    scen = tone_scenario(
        carrier_hz, f_max=1e9, duration_s=duration_s, seed=5, amplitude=amplitude
    )
    grid = 2.16e9
    x = synthesize(scen, grid)
    z = slice_oracle(x, 20e6, 55)
    l = int(round(carrier_hz / 20e6))
    support = SupportSet(indices=(-l, l))
    slices = {s: z[55 + s] for s in support.indices}
    return x, slices, support


def test_reconstruct_single_slice_tone_round_trip():
    # 412 MHz sits mid-slice; the rebuilt tone must carry the original
    # frequency and amplitude to within a percent
    x, slices, support = tone_slices(412e6)
    out = reconstruct_signal(slices, support, 20e6, x.sample_rate_hz, 2e-5)
    spec = np.abs(np.fft.rfft(out.samples)) / out.samples.size * 2
    freqs = np.fft.rfftfreq(out.samples.size, 1 / out.sample_rate_hz)
    k = int(np.argmax(spec))
    assert abs(freqs[k] - 412e6) <= freqs[1]
    assert spec[k] == pytest.approx(1.0, rel=0.01)


def test_reconstruct_round_trip_correlation():
    x, slices, support = tone_slices(412e6)
    out = reconstruct_signal(slices, support, 20e6, x.sample_rate_hz, 2e-5)
    n = min(out.samples.size, x.samples.size)
    a, b = out.samples[:n], x.samples[:n]
    corr = np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b))
    assert corr >= 0.99


def test_reconstruct_invents_no_energy():
    x, slices, support = tone_slices(412e6)
    out = reconstruct_signal(slices, support, 20e6, x.sample_rate_hz, 2e-5)
    e_in = np.sum(x.samples**2)
    assert np.sum(out.samples**2) <= e_in * (1 + 1e-6)


def test_carrier_estimate_off_center_tone():
    _, slices, support = tone_slices(500.005e6, duration_s=5e-5)
    carriers = estimate_carriers(slices, support, 20e6)
    assert len(carriers) == 1
    assert abs(carriers[0] - 500.005e6) <= 10e3


def test_carrier_estimate_slice_center_tone():
    _, slices, support = tone_slices(440e6, duration_s=5e-5)
    carriers = estimate_carriers(slices, support, 20e6)
    assert abs(carriers[0] - 440e6) <= 1e3


def test_carrier_estimates_survive_mirror_map():
    # conjugate-mirroring the slices of a real signal is an identity,
    # so the positive-side estimates must not move
    _, slices, support = tone_slices(500.005e6, duration_s=5e-5)
    mirrored = {l: np.conj(slices[-l]) for l in slices}
    a = estimate_carriers(slices, support, 20e6)
    b = estimate_carriers(mirrored, support, 20e6)
    np.testing.assert_allclose(a, b, atol=1.0)


def test_carrier_estimation_skips_silent_group(caplog):
    _, slices, _ = tone_slices(440e6, duration_s=5e-5)
    slices[7] = np.zeros_like(slices[22])
    slices[-7] = np.zeros_like(slices[22])
    support = SupportSet(indices=(-22, -7, 7, 22))
    with caplog.at_level("WARNING"):
        carriers = estimate_carriers(slices, support, 20e6)
    assert len(carriers) == 1
    assert abs(carriers[0] - 440e6) <= 1e3
    assert any("group" in rec.message for rec in caplog.records)
