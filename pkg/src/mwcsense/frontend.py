"""Front-end simulation: mix with periodic waveforms, lowpass, sample, expand.

Each of m physical channels multiplies the input by its chip waveform,
lowpass filters, and samples at f_s = q*f_p. A physical channel is then
digitally expanded into q virtual channels at rate f_p, giving the linear
model y[n] = C z[n] against the spectral slices z_l[n].

Grid conventions chosen so the model is exact linear algebra rather than an
approximation:
  - every brick-wall mask keeps the half-open signed-bin range [-c, c);
  - the mixing waveform is the truncated Fourier series with |l| <= l_cut
    (a hard chip edge cannot live on a finite grid without aliasing);
  - simulations run circularly over an integer number of chip periods.
Under these, expanded virtual samples equal C @ slice_oracle(x) to machine
precision; the relaxed 1e-3 module tolerance covers non-circular inputs.

For even q the analog cutoff is (q+1)*f_p/2, an odd number of slice widths,
and sampling at q*f_p folds the two outermost half-slices onto one virtual
channel; the sensing matrix mirrors that fold in its edge row.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidArgument, InvalidConfig
from .signals import DenseSignal, SignalScenario, nyquist_rate
from .waveforms import WaveformBank, render_bandlimited

logger = logging.getLogger(__name__)

_REL_TOL = 1e-9


def default_l(f_max: float, f_p: float, q: int) -> int:
    """Smallest slice half-range covering both the sampler passband and the
    mixer's reach from the topmost occupied slice."""
    cover = math.ceil((2.0 * f_max / f_p + q - 1) / 2.0 - 1e-9)
    s_max = math.floor(f_max / f_p + 0.5 + 1e-9)
    return max(cover, s_max + 2 * (q // 2), 0)


@dataclass(frozen=True)
class MwcConfig:
    """Converter parameters. f_s is derived (always q*f_p); adc_rate_hz lets a
    hardware profile report a faster physical ADC without changing the DSP."""

    m: int
    q: int
    f_p: float
    m_chips: int
    L: int | None = None
    n_snapshots: int = 64
    f_s: float | None = None
    adc_rate_hz: float | None = None
    l_cut: int | None = None

    def __post_init__(self):
        def fail(msg, **details):
            raise InvalidConfig(msg, details)

        for name in ("m", "q", "m_chips", "n_snapshots"):
            value = getattr(self, name)
            if int(value) != value or int(value) < 1:
                fail(f"{name} must be a positive integer", **{name: value})
            object.__setattr__(self, name, int(value))
        if not self.f_p > 0:
            fail("f_p must be positive", f_p=self.f_p)
        derived_fs = self.q * self.f_p
        if self.f_s is not None and abs(self.f_s - derived_fs) > _REL_TOL * derived_fs:
            fail(
                f"f_s must equal q*f_p = {derived_fs}",
                f_s=self.f_s,
                q=self.q,
                f_p=self.f_p,
            )
        object.__setattr__(self, "f_s", derived_fs)
        if self.adc_rate_hz is not None and self.adc_rate_hz < derived_fs * (1 - _REL_TOL):
            fail(
                "adc_rate_hz cannot be below the working rate q*f_p",
                adc_rate_hz=self.adc_rate_hz,
            )
        if self.L is not None:
            if int(self.L) != self.L or int(self.L) < 0:
                fail("L must be a non-negative integer", L=self.L)
            object.__setattr__(self, "L", int(self.L))
        if self.l_cut is not None:
            if int(self.l_cut) != self.l_cut or int(self.l_cut) < 0:
                fail("l_cut must be a non-negative integer", l_cut=self.l_cut)
            object.__setattr__(self, "l_cut", int(self.l_cut))

    @property
    def t_p(self) -> float:
        return 1.0 / self.f_p

    @property
    def n_rows(self) -> int:
        return self.m * self.q

    @property
    def shifts(self) -> tuple[int, ...]:
        """Demodulation shifts r, ascending; q integers centered on zero
        (biased one step down for even q, whose -q/2 row carries the fold)."""
        half = self.q // 2
        if self.q % 2 == 1:
            return tuple(range(-half, half + 1))
        return tuple(range(-half, half))

    @property
    def lowpass_cutoff_hz(self) -> float:
        return (2 * (self.q // 2) + 1) * self.f_p / 2.0

    @property
    def effective_adc_rate_hz(self) -> float:
        return self.adc_rate_hz if self.adc_rate_hz is not None else self.f_s

    def effective_l_cut(self) -> int:
        if self.l_cut is not None:
            return self.l_cut
        if self.L is None:
            raise InvalidConfig("L is unresolved; call resolved(f_max) first")
        return max(self.L - self.q // 2, 0)

    def resolved(self, f_max: float) -> "MwcConfig":
        if self.L is not None:
            return self
        return replace(self, L=default_l(f_max, self.f_p, self.q))

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "q": self.q,
            "f_p": self.f_p,
            "m_chips": self.m_chips,
            "L": self.L,
            "n_snapshots": self.n_snapshots,
            "f_s": self.f_s,
            "adc_rate_hz": self.adc_rate_hz,
            "l_cut": self.l_cut,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MwcConfig":
        try:
            return cls(
                m=d["m"],
                q=d["q"],
                f_p=float(d["f_p"]),
                m_chips=d["m_chips"],
                L=d.get("L"),
                n_snapshots=d.get("n_snapshots", 64),
                f_s=None if d.get("f_s") is None else float(d["f_s"]),
                adc_rate_hz=None if d.get("adc_rate_hz") is None else float(d["adc_rate_hz"]),
                l_cut=d.get("l_cut"),
            )
        except InvalidConfig:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig(f"malformed config: {exc}", {"config": d}) from exc


@dataclass(frozen=True)
class SampleMatrix:
    """Virtual-channel measurement sequences at rate f_p.

    Row ordering is physical-channel major, demodulation shift minor
    (ascending r), matching the sensing matrix's row convention.
    """

    rows: np.ndarray
    f_p: float
    m: int
    q: int
    ordering: str = "channel-major"

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.complex128)
        if rows.ndim != 2:
            raise InvalidArgument("rows must be a 2-d array")
        if rows.shape[0] != self.m * self.q:
            raise InvalidArgument(
                f"expected {self.m * self.q} rows, got {rows.shape[0]}",
                {"rows": rows.shape[0], "m": self.m, "q": self.q},
            )
        object.__setattr__(self, "rows", rows)

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n_snapshots(self) -> int:
        return int(self.rows.shape[1])

    def truncated(self, n: int) -> "SampleMatrix":
        if n > self.n_snapshots:
            raise InvalidArgument(
                f"cannot keep {n} snapshots of {self.n_snapshots}"
            )
        return replace(self, rows=self.rows[:, :n])


@dataclass(frozen=True)
class RateReport:
    """Rate accounting and advisory parameter checks for a (config, scenario) pair."""

    total_sample_rate_hz: float
    nyquist_rate_hz: float
    ratio_to_nyquist: float
    basic_config_pass: bool
    chip_rate_pass: bool
    coverage_pass: bool
    four_nb_hz: float
    notes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "total_sample_rate_hz": self.total_sample_rate_hz,
            "nyquist_rate_hz": self.nyquist_rate_hz,
            "ratio_to_nyquist": self.ratio_to_nyquist,
            "basic_config_pass": self.basic_config_pass,
            "chip_rate_pass": self.chip_rate_pass,
            "coverage_pass": self.coverage_pass,
            "four_nb_hz": self.four_nb_hz,
            "notes": list(self.notes),
        }


def validate_config(config: MwcConfig, scenario: SignalScenario) -> RateReport:
    """Rate report plus advisory pass/fail of the guideline inequalities.

    Guideline failures are advisory only (undersampled regimes are a
    legitimate operating point); structural violations raise at MwcConfig
    construction time.
    """
    f_max = scenario.f_max
    n_intervals = scenario.n_bands_max
    b_max = scenario.band_width_max_hz
    resolved = config.resolved(f_max)
    notes = []

    total = config.m * config.effective_adc_rate_hz
    nyq = nyquist_rate(f_max)

    basic = config.q == 1
    if config.q != 1:
        notes.append(f"collapsed configuration (q={config.q}); basic-config checks need q=1")
    if config.f_p < b_max:
        basic = False
        notes.append(f"f_p={config.f_p:g} below the maximal band width B={b_max:g}")
    if config.m < 4 * n_intervals:
        basic = False
        notes.append(f"m={config.m} below the 4N={4 * n_intervals} channel guideline")

    chip_ok = config.m_chips * config.f_p >= nyq * (1 - _REL_TOL)
    if not chip_ok:
        notes.append(
            f"chip rate {config.m_chips * config.f_p:g} cannot alias the full "
            f"range up to f_max={f_max:g}"
        )
    coverage_ok = (2 * resolved.L + 1) * config.f_p >= (nyq + config.f_s) * (1 - _REL_TOL)
    if not coverage_ok:
        notes.append(
            f"(2L+1)*f_p={(2 * resolved.L + 1) * config.f_p:g} does not cover "
            f"2*f_max + f_s={nyq + config.f_s:g}"
        )

    return RateReport(
        total_sample_rate_hz=total,
        nyquist_rate_hz=nyq,
        ratio_to_nyquist=total / nyq,
        basic_config_pass=basic,
        chip_rate_pass=chip_ok,
        coverage_pass=coverage_ok,
        four_nb_hz=4.0 * n_intervals * b_max,
        notes=tuple(notes),
    )


def choose_grid_rate(config: MwcConfig, f_max: float) -> float:
    """Smallest dense-grid rate that is an even integer number of samples per
    chip period, divides cleanly into f_s, and holds every mixed image
    (input up to f_max shifted by up to l_cut harmonics) without wrap."""
    resolved = config.resolved(f_max)
    l_cut = resolved.effective_l_cut()
    needed = 2.0 * (f_max + l_cut * config.f_p)
    s = 1
    while True:
        per_period = s * config.m_chips
        rate = per_period * config.f_p
        if per_period % config.q == 0 and per_period % 2 == 0 and rate >= needed * (1 - _REL_TOL):
            return rate
        s += 1


def _periods_and_bins(x: DenseSignal, f_p: float) -> tuple[int, float]:
    """Samples per chip period (must be integral) and bins per f_p of x's FFT."""
    per_period = x.sample_rate_hz / f_p
    n_per = int(round(per_period))
    if n_per < 1 or abs(per_period - n_per) > 1e-6 * max(per_period, 1.0):
        raise InvalidArgument(
            "dense grid is not an integer number of samples per chip period",
            {"sample_rate_hz": x.sample_rate_hz, "f_p": f_p},
        )
    return n_per, x.n_samples / n_per


def simulate_frontend(
    x: DenseSignal, bank: WaveformBank, config: MwcConfig
) -> np.ndarray:
    """Per-channel mix, ideal lowpass, and decimation to rate f_s.

    Returns an (m, n_raw) complex array. Imaginary parts are negligible for
    odd q (symmetric passband); even q keeps the deliberately folded edge
    slice, which the expansion and sensing matrix both account for.
    """
    if bank.m != config.m:
        raise InvalidArgument(
            f"bank has {bank.m} patterns for m={config.m} channels"
        )
    if bank.m_chips != config.m_chips:
        raise InvalidArgument(
            f"bank chip count {bank.m_chips} != config m_chips {config.m_chips}"
        )
    if abs(bank.period_s - config.t_p) > _REL_TOL * config.t_p:
        raise InvalidArgument(
            "bank period does not match 1/f_p",
            {"period_s": bank.period_s, "t_p": config.t_p},
        )
    n_per, bins_per_fp = _periods_and_bins(x, config.f_p)
    if n_per % config.q != 0:
        raise InvalidArgument(
            "samples per period must divide by q for integer decimation",
            {"samples_per_period": n_per, "q": config.q},
        )
    l_cut = config.effective_l_cut()

    n_tot = x.n_samples
    step = n_per // config.q
    n_periods = math.ceil(n_tot / n_per)
    cut_bins = int(round((2 * (config.q // 2) + 1) * 0.5 * bins_per_fp))
    mask = np.zeros(n_tot, dtype=bool)
    if 2 * cut_bins >= n_tot:
        mask[:] = True
    else:
        mask[:cut_bins] = True
        if cut_bins > 0:
            mask[-cut_bins:] = True

    out = np.empty((config.m, math.ceil(n_tot / step)), dtype=np.complex128)
    for i, pattern in enumerate(bank.patterns):
        wave = render_bandlimited(pattern, x.sample_rate_hz, n_periods, l_cut)[:n_tot]
        spectrum = np.fft.fft(x.samples * wave)
        spectrum[~mask] = 0.0
        out[i] = np.fft.ifft(spectrum)[::step]
    return out


def expand_channels(raw: np.ndarray, config: MwcConfig) -> SampleMatrix:
    """Expand each physical channel into q virtual channels at rate f_p.

    Shift r demodulates by exp(-2j*pi*r*f_p*t), brick-wall filters to
    [-f_p/2, f_p/2), and decimates by q. Trailing samples that do not fill a
    whole output column (and one extra column when the count comes out odd,
    keeping the masks integral) are dropped with a diagnostic.
    """
    raw = np.asarray(raw, dtype=np.complex128)
    if raw.ndim != 2 or raw.shape[0] != config.m:
        raise InvalidArgument(
            f"raw must be (m, n) with m={config.m}", {"shape": raw.shape}
        )
    n_u = raw.shape[1]
    n_z = n_u // config.q
    if n_z >= 2 and n_z % 2 == 1:
        n_z -= 1
    if n_z < 1:
        raise InvalidArgument("fewer raw samples than one output snapshot")
    kept = n_z * config.q
    if kept < n_u:
        logger.warning("expand_channels dropping %d trailing raw samples", n_u - kept)

    u = raw[:, :kept]
    spectra = np.fft.fft(u, axis=1)
    half = n_z // 2
    mask = np.zeros(kept, dtype=bool)
    mask[:half] = True
    mask[-half:] = True

    out = np.empty((config.m * config.q, n_z), dtype=np.complex128)
    for r_idx, r in enumerate(config.shifts):
        shifted = np.roll(spectra, -r * n_z, axis=1)
        shifted[:, ~mask] = 0.0
        virtual = np.fft.ifft(shifted, axis=1)[:, :: config.q]
        out[r_idx :: config.q] = virtual

    if n_z < config.n_snapshots:
        logger.warning(
            "only %d snapshots available (config asks for %d)", n_z, config.n_snapshots
        )
    return SampleMatrix(rows=out, f_p=config.f_p, m=config.m, q=config.q)


def slice_oracle(
    x: DenseSignal, f_p: float, L: int, n_snapshots: int | None = None
) -> np.ndarray:
    """Rate-f_p samples of every slice demodulated to baseband.

    Row j holds l = j - L. Slice l gathers the half-open FFT bin range
    [l*b - b/2, l*b + b/2) where b is bins-per-f_p, so each bin belongs to
    exactly one slice and the aliasing model stays an exact linear map.
    """
    if not f_p > 0:
        raise InvalidArgument("f_p must be positive", {"f_p": f_p})
    n_tot = x.n_samples
    b_float = n_tot * f_p / x.sample_rate_hz
    b = int(round(b_float))
    if b < 1 or abs(b_float - b) > 1e-6:
        raise InvalidArgument(
            "signal length is not an integer number of slice-rate samples",
            {"bins_per_slice": b_float},
        )
    spectrum = np.fft.fft(np.asarray(x.samples))
    ks = np.arange(b)
    ks_signed = ((ks + b // 2) % b) - b // 2
    z = np.empty((2 * L + 1, b), dtype=np.complex128)
    for j, l in enumerate(range(-L, L + 1)):
        z[j] = np.fft.ifft(spectrum[(l * b + ks_signed) % n_tot]) * (b / n_tot)
    if n_snapshots is not None:
        if n_snapshots > b:
            raise InvalidArgument(
                f"requested {n_snapshots} snapshots but only {b} exist"
            )
        z = z[:, :n_snapshots]
    return z
