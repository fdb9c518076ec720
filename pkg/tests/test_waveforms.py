"""Periodic +-1 mixing patterns and their Fourier series."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mwcsense import (
    ChipPattern,
    InvalidArgument,
    fourier_coeffs,
    fourier_coeffs_at,
    gen_random_bank,
    gen_tapped_bank,
    render_dense,
)

chips_strategy = st.lists(st.sampled_from([1, -1]), min_size=1, max_size=24).map(tuple)


def quad_coeff(pattern, l, samples_per_chip=4096):
    """Trapezoid quadrature of (1/T) integral p(t) exp(-j2 pi l t / T) dt.

    Independent of the closed form under test: the integrand is evaluated
    on a fine grid and integrated numerically, chip by chip.
    """
    M = len(pattern.chips)
    T = pattern.period_s
    total = 0.0 + 0.0j
    for k, chip in enumerate(pattern.chips):
        t = np.linspace(k * T / M, (k + 1) * T / M, samples_per_chip + 1)
        total += chip * np.trapezoid(np.exp(-2j * np.pi * l * t / T), t)
    return total / T


def test_single_chip_bank():
    bank = gen_random_bank(1, 1, seed=0)
    assert bank.patterns[0].chips[0] in (1.0, -1.0)


def test_bank_deterministic():
    a = gen_random_bank(4, 108, seed=7)
    b = gen_random_bank(4, 108, seed=7)
    assert all(np.array_equal(x.chips, y.chips) for x, y in zip(a.patterns, b.patterns))


def test_chip_means_concentrate():
    # binomial concentration: nearly all seeds keep |mean| under 3/sqrt(M)
    bound = 3 / np.sqrt(108)
    hits = 0
    for seed in range(40):
        bank = gen_random_bank(4, 108, seed=seed)
        hits += all(abs(np.mean(p.chips)) <= bound for p in bank.patterns)
    assert hits >= 36


def test_tapped_identity():
    base = ChipPattern(chips=(1, -1, -1, 1), period_s=1.0)
    bank = gen_tapped_bank(base, [0])
    assert np.array_equal(bank.patterns[0].chips, base.chips)


def test_tapped_hand_rotation():
    base = ChipPattern(chips=(1, -1, -1), period_s=1.0)
    bank = gen_tapped_bank(base, [1])
    assert np.array_equal(bank.patterns[0].chips, [-1, -1, 1])


def test_tapped_duplicate_taps_rejected():
    base = ChipPattern(chips=(1, -1, -1), period_s=1.0)
    with pytest.raises(InvalidArgument):
        gen_tapped_bank(base, [1, 1])


@given(chips=chips_strategy, k=st.integers(min_value=0, max_value=23))
def test_tap_offset_is_cyclic_rotation(chips, k):
    k = k % len(chips)
    base = ChipPattern(chips=chips, period_s=1.0)
    bank = gen_tapped_bank(base, [0, k] if k else [0])
    rotated = bank.patterns[-1].chips
    assert np.array_equal(rotated, chips[k:] + chips[:k])


def test_constant_pattern_coefficients():
    pat = ChipPattern(chips=(1,) * 8, period_s=1.0)
    c = fourier_coeffs(pat, 6)
    assert c[6] == pytest.approx(1.0)
    off = np.delete(c, 6)
    assert np.max(np.abs(off)) < 1e-12


def test_square_wave_coefficients():
    # classical series: |c_l| = 2/(pi l) for odd l, zero for even l != 0
    pat = ChipPattern(chips=(1, -1), period_s=1.0)
    c = fourier_coeffs(pat, 7)
    for l in range(-7, 8):
        want = 2 / (np.pi * abs(l)) if l % 2 else 0.0
        assert abs(c[l + 7]) == pytest.approx(want, abs=1e-12)


def test_coefficients_match_quadrature():
    rng = np.random.default_rng(5)
    pat = ChipPattern(
        chips=tuple(int(v) for v in rng.choice([1, -1], size=12)), period_s=0.5e-7
    )
    for l in (0, 1, 5, 11, 17):
        want = quad_coeff(pat, l)
        got = fourier_coeffs_at(pat, np.array([l]))[0]
        scale = max(abs(want), 1e-3)
        assert abs(got - want) / scale < 1e-6


@given(chips=chips_strategy)
def test_coefficients_conjugate_symmetric(chips):
    pat = ChipPattern(chips=chips, period_s=1.0)
    c = fourier_coeffs(pat, 9)
    np.testing.assert_allclose(c[::-1], np.conj(c), atol=1e-14)


@given(chips=chips_strategy)
def test_parseval_partial_sums_climb_to_one(chips):
    # total power of a +-1 waveform is exactly 1; the slowest convergence
    # comes from a fully alternating pattern, whose fundamental sits at
    # order len(chips)/2, so the final cutoff scales with the length
    pat = ChipPattern(chips=chips, period_s=1.0)
    cutoffs = (4, 16, 64, 40 * len(chips))
    sums = []
    for L in cutoffs:
        c = fourier_coeffs(pat, L)
        sums.append(np.sum(np.abs(c) ** 2))
    assert all(s <= 1.0 + 1e-12 for s in sums)
    assert all(b >= a - 1e-12 for a, b in zip(sums, sums[1:]))
    assert sums[-1] > 0.99


def test_tapped_bank_shares_magnitudes():
    rng = np.random.default_rng(9)
    base = ChipPattern(
        chips=tuple(int(v) for v in rng.choice([1, -1], size=16)), period_s=1.0
    )
    bank = gen_tapped_bank(base, [0, 3, 7])
    cs = [fourier_coeffs(p, 10) for p in bank.patterns]
    for c in cs[1:]:
        np.testing.assert_allclose(np.abs(c), np.abs(cs[0]), atol=1e-12)
    # tap k advances the waveform by k chips, rotating each c_l by a
    # unit-modulus phase exp(+j 2 pi l k / M)
    M = 16
    ls = np.arange(-10, 11)
    np.testing.assert_allclose(
        cs[1], cs[0] * np.exp(2j * np.pi * ls * 3 / M), atol=1e-12
    )


def test_render_dense_all_ones():
    pat = ChipPattern(chips=(1, 1, 1), period_s=1.0)
    assert np.array_equal(render_dense(pat, 6.0), np.ones(6))


def test_render_dense_hand_case():
    pat = ChipPattern(chips=(1, -1), period_s=1.0)
    assert np.array_equal(render_dense(pat, 4.0), [1.0, 1.0, -1.0, -1.0])


def test_render_dense_requires_commensurate_grid():
    pat = ChipPattern(chips=(1, -1, 1), period_s=1.0)
    with pytest.raises(InvalidArgument):
        render_dense(pat, 4.0)


@given(chips=chips_strategy, mult=st.integers(min_value=1, max_value=6))
def test_render_dense_preserves_mean(chips, mult):
    pat = ChipPattern(chips=chips, period_s=1.0)
    out = render_dense(pat, float(len(chips) * mult))
    assert np.mean(out) == pytest.approx(np.mean(chips))
