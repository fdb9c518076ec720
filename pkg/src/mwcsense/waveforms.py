"""Periodic sign-alternating mixing waveforms and their Fourier coefficients.

A pattern is M chips, each +1 or -1, held for T_p/M. The coefficient of the
l-th harmonic of the T_p-periodic waveform has the closed form

    c_l = d_l * sum_k chips[k] * exp(-2j*pi*l*k/M)
    d_0 = 1/M,   d_l = (1 - exp(-2j*pi*l/M)) / (2j*pi*l)   (l != 0)

i.e. a DFT of the chip sequence times a per-harmonic hold factor. The sum is
M-periodic in l, so coefficients at arbitrary orders come from the same DFT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument

DERIVATIONS = ("independent_random", "tapped_register")


@dataclass(frozen=True)
class ChipPattern:
    """One periodic +-1 chip sequence with its period in seconds."""

    chips: np.ndarray
    period_s: float

    def __post_init__(self):
        chips = np.asarray(self.chips, dtype=np.float64)
        if chips.ndim != 1 or chips.size < 1:
            raise InvalidArgument("chips must be a non-empty 1-d sequence")
        if not np.all(np.abs(chips) == 1.0):
            raise InvalidArgument("every chip must be +1 or -1")
        if not self.period_s > 0:
            raise InvalidArgument("period_s must be positive", {"period_s": self.period_s})
        object.__setattr__(self, "chips", chips)

    @property
    def m_chips(self) -> int:
        return int(self.chips.size)


@dataclass(frozen=True)
class WaveformBank:
    """m chip patterns sharing one period, plus how they were derived."""

    patterns: tuple[ChipPattern, ...]
    derivation: str = "independent_random"
    taps: tuple[int, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        patterns = tuple(self.patterns)
        if len(patterns) < 1:
            raise InvalidArgument("a bank needs at least one pattern")
        m_chips = patterns[0].m_chips
        period = patterns[0].period_s
        for p in patterns:
            if p.m_chips != m_chips or p.period_s != period:
                raise InvalidArgument("all patterns must share m_chips and period_s")
        if self.derivation not in DERIVATIONS:
            raise InvalidArgument(f"unknown derivation {self.derivation!r}")
        if self.derivation == "tapped_register":
            if self.taps is None or len(self.taps) != len(patterns):
                raise InvalidArgument("tapped_register banks need one tap per pattern")
        object.__setattr__(self, "patterns", patterns)
        if self.taps is not None:
            object.__setattr__(self, "taps", tuple(int(t) for t in self.taps))

    @property
    def m(self) -> int:
        return len(self.patterns)

    @property
    def m_chips(self) -> int:
        return self.patterns[0].m_chips

    @property
    def period_s(self) -> float:
        return self.patterns[0].period_s

    def chip_matrix(self) -> np.ndarray:
        return np.stack([p.chips for p in self.patterns])


def gen_random_bank(
    m: int, m_chips: int, seed: int, period_s: float = 1.0
) -> WaveformBank:
    """m independent uniform +-1 patterns; deterministic given seed."""
    if m < 1 or m_chips < 1:
        raise InvalidArgument("m and m_chips must be at least 1", {"m": m, "m_chips": m_chips})
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    chips = rng.integers(0, 2, size=(m, m_chips)).astype(np.float64) * 2.0 - 1.0
    patterns = tuple(ChipPattern(chips=row, period_s=period_s) for row in chips)
    return WaveformBank(patterns=patterns, derivation="independent_random", seed=int(seed))


def gen_tapped_bank(base: ChipPattern, taps: list[int]) -> WaveformBank:
    """Patterns read from different taps of one circular register.

    Tap k yields the base pattern rotated left by k chips:
    pattern[j] = base[(j + k) mod M].
    """
    taps = [int(t) for t in taps]
    if len(set(taps)) != len(taps):
        raise InvalidArgument("tap offsets must be distinct", {"taps": taps})
    for t in taps:
        if not 0 <= t < base.m_chips:
            raise InvalidArgument(
                f"tap {t} outside [0, {base.m_chips})", {"tap": t}
            )
    patterns = tuple(
        ChipPattern(chips=np.roll(base.chips, -t), period_s=base.period_s) for t in taps
    )
    return WaveformBank(patterns=patterns, derivation="tapped_register", taps=tuple(taps))


def fourier_coeffs_at(pattern: ChipPattern, orders: np.ndarray) -> np.ndarray:
    """Closed-form coefficients c_l at arbitrary integer orders."""
    orders = np.asarray(orders, dtype=np.int64)
    m = pattern.m_chips
    dft = np.fft.fft(pattern.chips)
    safe = np.where(orders == 0, 1, orders)
    d = np.where(
        orders == 0,
        1.0 / m,
        (1.0 - np.exp(-2j * np.pi * orders / m)) / (2j * np.pi * safe),
    )
    return d * dft[np.mod(orders, m)]


def fourier_coeffs(pattern: ChipPattern, l_max: int) -> np.ndarray:
    """Coefficients over l = -l_max .. +l_max (index j holds l = j - l_max)."""
    if l_max < 0:
        raise InvalidArgument("l_max must be non-negative", {"l_max": l_max})
    return fourier_coeffs_at(pattern, np.arange(-l_max, l_max + 1))


def render_dense(pattern: ChipPattern, grid_rate: float) -> np.ndarray:
    """One period of the piecewise-constant waveform on the dense grid."""
    per_period = grid_rate * pattern.period_s
    n = int(round(per_period))
    if abs(per_period - n) > 1e-6 or n % pattern.m_chips != 0:
        raise InvalidArgument(
            "grid_rate * period_s must be an integer multiple of m_chips",
            {"samples_per_period": per_period, "m_chips": pattern.m_chips},
        )
    return np.repeat(pattern.chips, n // pattern.m_chips)


def render_bandlimited(
    pattern: ChipPattern, grid_rate: float, n_periods: int, l_cut: int
) -> np.ndarray:
    """n_periods of the waveform's Fourier series truncated at |l| <= l_cut.

    This is what the front-end simulation mixes with: a hard chip edge has
    harmonics beyond any finite grid, so the piecewise-constant render would
    alias and the simulated channel would drift from the analytic matrix.
    The truncated series is exactly representable on the grid.
    """
    per_period = grid_rate * pattern.period_s
    n = int(round(per_period))
    if abs(per_period - n) > 1e-6 or n < 1:
        raise InvalidArgument(
            "grid_rate * period_s must be a positive integer",
            {"samples_per_period": per_period},
        )
    if l_cut < 0 or 2 * l_cut + 1 > n:
        raise InvalidArgument(
            "grid too coarse for the requested harmonic budget",
            {"l_cut": l_cut, "samples_per_period": n},
        )
    orders = np.arange(-l_cut, l_cut + 1)
    coeffs = fourier_coeffs_at(pattern, orders)
    spectrum = np.zeros(n, dtype=complex)
    spectrum[np.mod(orders, n)] = coeffs * n
    one_period = np.fft.ifft(spectrum).real
    return np.tile(one_period, int(n_periods))
