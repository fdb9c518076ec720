"""Sparse multiband test signals on a dense grid, plus ground-truth support.

The model: a real-valued wideband input occupying at most ``n_bands_max``
spectral intervals inside [-f_max, f_max], each interval no wider than
``band_width_max_hz``. A real transmission contributes a positive-frequency
interval and its mirror image, so one BandSpec consumes two of the interval
budget. Synthesis happens on a dense uniform grid that stands in for
continuous time; everything downstream treats that grid as "analog".
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, InvalidScenario

MODULATIONS = ("pure_sine", "am", "fm")

# entropy-stream tags so band phases and the noise draw never collide
_PHASE_TAG = 0x70686173
_NOISE_TAG = 0x6E6F6973


def nyquist_rate(f_max: float) -> float:
    """Twice the highest frequency present in the wideband input."""
    if not f_max > 0:
        raise InvalidArgument("f_max must be positive", {"f_max": f_max})
    return 2.0 * f_max


@dataclass(frozen=True)
class BandSpec:
    """One transmission: carrier, occupied width, amplitude, modulation.

    mod_params keys by modulation:
      am: envelope_rate_hz (required), depth (optional, default 0.5)
      fm: deviation_hz and rate_hz (both required)
      pure_sine: none (bandwidth_hz is treated as 0)
    """

    carrier_hz: float
    bandwidth_hz: float = 0.0
    amplitude: float = 1.0
    modulation: str = "pure_sine"
    mod_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.modulation not in MODULATIONS:
            raise InvalidArgument(
                f"unknown modulation {self.modulation!r}",
                {"modulation": self.modulation},
            )

    @property
    def occupied_width_hz(self) -> float:
        """Spectral width used for support bookkeeping (0 for a pure sine)."""
        if self.modulation == "pure_sine":
            return 0.0
        return float(self.bandwidth_hz)

    def occupied_interval(self) -> tuple[float, float]:
        w = self.occupied_width_hz
        return (self.carrier_hz - w / 2.0, self.carrier_hz + w / 2.0)

    def to_dict(self) -> dict:
        return {
            "carrier_hz": self.carrier_hz,
            "bandwidth_hz": self.bandwidth_hz,
            "amplitude": self.amplitude,
            "modulation": self.modulation,
            "mod_params": dict(self.mod_params),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BandSpec":
        try:
            return cls(
                carrier_hz=float(d["carrier_hz"]),
                bandwidth_hz=float(d.get("bandwidth_hz", 0.0)),
                amplitude=float(d.get("amplitude", 1.0)),
                modulation=str(d.get("modulation", "pure_sine")),
                mod_params={k: float(v) for k, v in d.get("mod_params", {}).items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidScenario(f"malformed band: {exc}", {"band": d}) from exc


@dataclass(frozen=True)
class SignalScenario:
    """Declarative description of a sparse multiband input."""

    f_max: float
    n_bands_max: int
    band_width_max_hz: float
    bands: tuple[BandSpec, ...]
    duration_s: float
    snr_db: float | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple(self.bands))

    def to_dict(self) -> dict:
        return {
            "f_max": self.f_max,
            "n_bands_max": self.n_bands_max,
            "band_width_max_hz": self.band_width_max_hz,
            "bands": [b.to_dict() for b in self.bands],
            "duration_s": self.duration_s,
            "snr_db": self.snr_db,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SignalScenario":
        try:
            scenario = cls(
                f_max=float(d["f_max"]),
                n_bands_max=int(d["n_bands_max"]),
                band_width_max_hz=float(d["band_width_max_hz"]),
                bands=tuple(BandSpec.from_dict(b) for b in d.get("bands", [])),
                duration_s=float(d["duration_s"]),
                snr_db=None if d.get("snr_db") is None else float(d["snr_db"]),
                seed=int(d.get("seed", 0)),
            )
        except InvalidScenario:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidScenario(f"malformed scenario: {exc}", {"scenario": d}) from exc
        validate_scenario(scenario)
        return scenario


def validate_scenario(scenario: SignalScenario) -> None:
    """Check every scenario invariant; raise InvalidScenario with the field path."""

    def fail(path, msg, value):
        raise InvalidScenario(f"{path}: {msg}", {"field": path, "value": value})

    if not scenario.f_max > 0:
        fail("f_max", "must be positive", scenario.f_max)
    if scenario.n_bands_max < 0:
        fail("n_bands_max", "must be non-negative", scenario.n_bands_max)
    if scenario.band_width_max_hz < 0:
        fail("band_width_max_hz", "must be non-negative", scenario.band_width_max_hz)
    if not scenario.duration_s > 0:
        fail("duration_s", "must be positive", scenario.duration_s)
    if scenario.snr_db is not None and not math.isfinite(scenario.snr_db):
        fail("snr_db", "must be finite or null", scenario.snr_db)
    if 2 * len(scenario.bands) > scenario.n_bands_max:
        fail(
            "bands",
            f"{len(scenario.bands)} transmissions need "
            f"{2 * len(scenario.bands)} spectral intervals but n_bands_max is "
            f"{scenario.n_bands_max}",
            len(scenario.bands),
        )
    for i, band in enumerate(scenario.bands):
        path = f"bands[{i}]"
        if not band.carrier_hz > 0:
            fail(f"{path}.carrier_hz", "must be positive", band.carrier_hz)
        if band.bandwidth_hz < 0:
            fail(f"{path}.bandwidth_hz", "must be non-negative", band.bandwidth_hz)
        if band.bandwidth_hz > scenario.band_width_max_hz:
            fail(
                f"{path}.bandwidth_hz",
                f"exceeds band_width_max_hz={scenario.band_width_max_hz}",
                band.bandwidth_hz,
            )
        if band.carrier_hz + band.occupied_width_hz / 2.0 > scenario.f_max:
            fail(
                f"{path}.carrier_hz",
                f"band edge exceeds f_max={scenario.f_max}",
                band.carrier_hz,
            )
        if not band.amplitude > 0:
            fail(f"{path}.amplitude", "must be positive", band.amplitude)
        if band.modulation == "am":
            rate = band.mod_params.get("envelope_rate_hz")
            if rate is None or not rate > 0:
                fail(f"{path}.mod_params.envelope_rate_hz", "required and positive", rate)
            depth = band.mod_params.get("depth", 0.5)
            if not 0 < depth <= 1:
                fail(f"{path}.mod_params.depth", "must be in (0, 1]", depth)
        elif band.modulation == "fm":
            dev = band.mod_params.get("deviation_hz")
            rate = band.mod_params.get("rate_hz")
            if dev is None or dev < 0:
                fail(f"{path}.mod_params.deviation_hz", "required and non-negative", dev)
            if rate is None or not rate > 0:
                fail(f"{path}.mod_params.rate_hz", "required and positive", rate)


@dataclass(frozen=True)
class DenseSignal:
    """Real samples on a uniform grid standing in for continuous time."""

    sample_rate_hz: float
    samples: np.ndarray
    t0: float = 0.0

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz

    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n_samples) / self.sample_rate_hz


@dataclass(frozen=True)
class SupportSet:
    """Sorted set of active slice indices l in [-L, L]."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "indices", tuple(sorted({int(i) for i in self.indices}))
        )

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, item):
        return int(item) in set(self.indices)

    def as_set(self) -> frozenset:
        return frozenset(self.indices)

    def symmetrized(self) -> "SupportSet":
        return SupportSet(self.indices + tuple(-i for i in self.indices))

    def mirrored(self) -> "SupportSet":
        return SupportSet(tuple(-i for i in self.indices))


def _band_entropy(band: BandSpec) -> int:
    # phase entropy depends only on the band's content, not its list position,
    # so synthesizing a union of band lists is exactly the sum of the parts
    blob = json.dumps(band.to_dict(), sort_keys=True).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _band_phase(scenario_seed: int, band: BandSpec) -> float:
    ss = np.random.SeedSequence([_PHASE_TAG, int(scenario_seed), _band_entropy(band)])
    return float(np.random.default_rng(ss).uniform(0.0, 2.0 * np.pi))


def _band_waveform(band: BandSpec, t: np.ndarray, phase: float) -> np.ndarray:
    carrier = 2.0 * np.pi * band.carrier_hz * t + phase
    if band.modulation == "pure_sine":
        return band.amplitude * np.cos(carrier)
    if band.modulation == "am":
        rate = band.mod_params["envelope_rate_hz"]
        depth = band.mod_params.get("depth", 0.5)
        envelope = 1.0 + depth * np.cos(2.0 * np.pi * rate * t)
        return band.amplitude * envelope * np.cos(carrier)
    if band.modulation == "fm":
        dev = band.mod_params["deviation_hz"]
        rate = band.mod_params["rate_hz"]
        beta = dev / rate
        return band.amplitude * np.cos(carrier + beta * np.sin(2.0 * np.pi * rate * t))
    raise InvalidArgument(f"unknown modulation {band.modulation!r}")


def synthesize(scenario: SignalScenario, grid_rate: float) -> DenseSignal:
    """Render the scenario on a dense grid; deterministic given the seed.

    Noise, when requested, is white Gaussian scaled so that its power inside
    [-f_max, f_max] sits snr_db below the total signal power.
    """
    validate_scenario(scenario)
    if grid_rate < nyquist_rate(scenario.f_max):
        raise InvalidArgument(
            f"grid_rate {grid_rate} below Nyquist rate {nyquist_rate(scenario.f_max)}",
            {"grid_rate": grid_rate, "f_max": scenario.f_max},
        )
    n = int(round(grid_rate * scenario.duration_s))
    if n < 1:
        raise InvalidArgument("duration too short for the grid", {"n_samples": n})
    t = np.arange(n) / grid_rate
    out = np.zeros(n)
    for band in scenario.bands:
        out += _band_waveform(band, t, _band_phase(scenario.seed, band))
    if scenario.snr_db is not None and scenario.bands:
        p_sig = float(np.mean(out**2))
        # white noise on the grid spreads over [-grid/2, grid/2]; only the
        # fraction inside [-f_max, f_max] counts toward the requested SNR
        p_noise_inband = p_sig * 10.0 ** (-scenario.snr_db / 10.0)
        sigma2 = p_noise_inband * grid_rate / (2.0 * scenario.f_max)
        rng = np.random.default_rng(
            np.random.SeedSequence([_NOISE_TAG, int(scenario.seed)])
        )
        out = out + rng.standard_normal(n) * math.sqrt(sigma2)
    return DenseSignal(sample_rate_hz=float(grid_rate), samples=out)


def occupied_intervals(scenario: SignalScenario) -> list[tuple[float, float]]:
    """Closed occupied intervals on both frequency signs."""
    out = []
    for band in scenario.bands:
        lo, hi = band.occupied_interval()
        out.append((lo, hi))
        out.append((-hi, -lo))
    return out


def true_support(scenario: SignalScenario, f_p: float, L: int) -> SupportSet:
    """All l in [-L, L] whose closed slice interval intersects an occupied interval."""
    if not f_p > 0:
        raise InvalidArgument("f_p must be positive", {"f_p": f_p})
    intervals = occupied_intervals(scenario)
    hits = []
    for l in range(-int(L), int(L) + 1):
        lo = l * f_p - f_p / 2.0
        hi = l * f_p + f_p / 2.0
        for a, b in intervals:
            if a <= hi and b >= lo:
                hits.append(l)
                break
    return SupportSet(tuple(hits))
