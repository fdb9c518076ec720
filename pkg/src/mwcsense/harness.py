"""Experiment harness: frequency sweep, mixture demo, Monte Carlo curves, timing.

Every run produces an ExperimentReport whose JSON form validates against
schemas/report.schema.json.  Trials carry the seed needed to replay them.
"""

from __future__ import annotations

import io
import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidArgument
from .frontend import MwcConfig, choose_grid_rate, expand_channels, simulate_frontend
from .pipeline import run_pipeline
from .presets import (
    DEMO_AM_CARRIER,
    DEMO_AM_ENVELOPE,
    prototype_config,
    demo_scenario,
    tone_scenario,
)
from .reconstruct import estimate_carriers, group_baseband, positive_groups, recover_slices
from .recovery import detect_support_full
from .sensing_matrix import build_matrix
from .signals import (
    BandSpec,
    SignalScenario,
    occupied_intervals,
    synthesize,
    true_support,
)
from .waveforms import gen_random_bank

SCHEMA_VERSION = 1

# entropy tag for Monte Carlo scenario draws, distinct from the signal-model tags
_MC_TAG = 0x6D63726C

_MC_AXES = ("m", "snr_db", "n_snapshots", "sparsity")


@dataclass
class TrialRecord:
    index: int
    seed: int
    success: bool
    scenario: dict | None = None
    true_support: tuple[int, ...] = ()
    detected_support: tuple[int, ...] = ()
    carrier_true_hz: float | None = None
    carrier_est_hz: float | None = None
    carrier_error_hz: float | None = None
    wall_time_s: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict = {
            "index": int(self.index),
            "seed": int(self.seed),
            "success": bool(self.success),
            "true_support": [int(l) for l in self.true_support],
            "detected_support": [int(l) for l in self.detected_support],
        }
        if self.scenario is not None:
            out["scenario"] = self.scenario
        for key in ("carrier_true_hz", "carrier_est_hz", "carrier_error_hz", "wall_time_s"):
            value = getattr(self, key)
            if value is not None:
                out[key] = float(value)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ExperimentReport:
    kind: str
    config: dict
    seeds: dict
    trials: list[TrialRecord]
    aggregates: dict

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    @property
    def success_fraction(self) -> float:
        if not self.trials:
            return 0.0
        return sum(t.success for t in self.trials) / len(self.trials)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "config": self.config,
            "seeds": {k: (None if v is None else int(v)) for k, v in self.seeds.items()},
            "trials": [t.to_dict() for t in self.trials],
            "aggregates": self.aggregates,
        }


def wilson_ci(successes: int, total: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if total <= 0:
        return (0.0, 1.0)
    p = successes / total
    z2 = z * z
    denom = 1.0 + z2 / total
    center = (p + z2 / (2 * total)) / denom
    half = z * math.sqrt(p * (1.0 - p) / total + z2 / (4.0 * total * total)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def required_support(scenario: SignalScenario, f_p: float, L: int) -> set[int]:
    """Slices that any correct detector must flag.

    A slice is required when a transmission overlaps its open interior with
    positive measure; energy exactly on a slice boundary may legitimately
    land in either neighbor, so boundary-touching slices are optional.
    """
    tol = 1e-9 * f_p
    required: set[int] = set()
    for lo, hi in occupied_intervals(scenario):
        for l in range(-L, L + 1):
            s_lo = l * f_p - f_p / 2.0
            s_hi = l * f_p + f_p / 2.0
            if hi - lo > tol:
                if min(hi, s_hi) - max(lo, s_lo) > tol:
                    required.add(l)
            else:
                # zero-width band: require strict interior containment
                if lo - s_lo > tol and s_hi - lo > tol:
                    required.add(l)
    return required


def support_matches(detected, scenario: SignalScenario, f_p: float, L: int) -> bool:
    """Boundary-neighbor success rule.

    The detected set must contain every slice with interior signal energy and
    must not contain any slice outside the closed-interval occupancy; slices
    merely touched at a boundary are accepted either way.
    """
    truth = set(true_support(scenario, f_p, L))
    det = {int(l) for l in detected}
    if not truth:
        return not det
    if not det:
        return False
    req = required_support(scenario, f_p, L)
    return req <= det <= truth


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float) - float(np.mean(a))
    b = np.asarray(b, dtype=float) - float(np.mean(b))
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    if denom == 0.0:
        return 0.0
    return float(np.dot(a, b) / denom)


# ---------------------------------------------------------------------------
# frequency sweep


def _sweep_config(f_max: float) -> MwcConfig:
    # prototype shape with the slice count re-derived from f_max so that the
    # sweep's top frequencies stay inside the modeled slice range
    return MwcConfig(
        m=4, q=3, f_p=20e6, m_chips=108, L=None, n_snapshots=64, adc_rate_hz=70e6
    ).resolved(f_max)


def _sweep_trial(args: tuple) -> TrialRecord:
    (index, f_hz, trial_seed, config, f_max, duration_s, bank_seed, carrier_tol_hz, snr_db) = args
    t0 = time.perf_counter()
    scenario = tone_scenario(
        f_hz, f_max=f_max, duration_s=duration_s, seed=trial_seed, snr_db=snr_db
    )
    result = run_pipeline(scenario, config, bank_seed=bank_seed)
    elapsed = time.perf_counter() - t0

    L = result.matrix.L
    truth = true_support(scenario, config.f_p, L)
    support_ok = support_matches(result.recovery.support, scenario, config.f_p, L)
    est = result.recovery.carriers_hz
    carrier_est = float(est[0]) if len(est) == 1 else None
    carrier_err = abs(carrier_est - f_hz) if carrier_est is not None else None
    success = bool(
        support_ok and carrier_err is not None and carrier_err <= carrier_tol_hz
    )
    return TrialRecord(
        index=index,
        seed=trial_seed,
        success=success,
        true_support=tuple(truth),
        detected_support=tuple(result.recovery.support),
        carrier_true_hz=f_hz,
        carrier_est_hz=carrier_est,
        carrier_error_hz=carrier_err,
        wall_time_s=elapsed,
        detail={"support_ok": support_ok, "frequency_hz": f_hz},
    )


def run_sweep(
    config: MwcConfig | None = None,
    f_start: float = 100e6,
    f_stop: float = 1100e6,
    f_step: float = 5e6,
    seed: int = 0,
    bank_seed: int = 0,
    carrier_tol_hz: float = 10e3,
    n_periods: int = 64,
    snr_db: float | None = None,
    workers: int = 0,
) -> ExperimentReport:
    """One single-tone trial per frequency on an inclusive grid.

    Success requires the boundary-neighbor support rule plus a carrier
    estimate within carrier_tol_hz.  Inclusive endpoints give 201 trials for
    the default 100..1100 MHz grid.
    """
    if f_step <= 0:
        raise InvalidArgument("f_step must be positive", {"f_step": f_step})
    if f_start > f_stop:
        raise InvalidArgument(
            "f_start must not exceed f_stop", {"f_start": f_start, "f_stop": f_stop}
        )
    freqs = np.arange(f_start, f_stop + f_step / 2.0, f_step)
    f_max = float(f_stop)
    if config is None:
        config = _sweep_config(f_max)
    else:
        config = config.resolved(f_max)
    duration_s = n_periods * config.t_p

    trial_seeds = [int(s) for s in np.random.SeedSequence(seed).generate_state(len(freqs))]
    jobs = [
        (i, float(f), trial_seeds[i], config, f_max, duration_s, bank_seed, carrier_tol_hz, snr_db)
        for i, f in enumerate(freqs)
    ]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(_sweep_trial, jobs))
    else:
        trials = [_sweep_trial(job) for job in jobs]
    trials.sort(key=lambda t: t.index)

    n_success = sum(t.success for t in trials)
    errors = [t.carrier_error_hz for t in trials if t.success]
    ci = wilson_ci(n_success, len(trials))
    outliers = [
        {"index": t.index, "frequency_hz": t.carrier_true_hz, "support_ok": t.detail["support_ok"]}
        for t in trials
        if not t.success
    ]
    aggregates = {
        "n_trials": len(trials),
        "n_success": n_success,
        "success_rate": n_success / len(trials) if trials else 0.0,
        "success_ci95": list(ci),
        "outliers": outliers,
        "carrier_error_hz_max": max(errors) if errors else None,
        "carrier_error_hz_median": float(np.median(errors)) if errors else None,
        "wall_time_s_total": sum(t.wall_time_s or 0.0 for t in trials),
    }
    return ExperimentReport(
        kind="sweep",
        config={
            "mwc": config.to_dict(),
            "f_start_hz": f_start,
            "f_stop_hz": f_stop,
            "f_step_hz": f_step,
            "n_periods": n_periods,
            "carrier_tol_hz": carrier_tol_hz,
            "snr_db": snr_db,
        },
        seeds={"seed": seed, "bank_seed": bank_seed},
        trials=trials,
        aggregates=aggregates,
    )


# ---------------------------------------------------------------------------
# three-transmission mixture demo


def run_mixture_demo(
    config: MwcConfig | None = None,
    seed: int = 7,
    bank_seed: int = 0,
    snr_db: float | None = None,
    duration_s: float = 1e-3,
    carrier_tol_hz: float = 50e3,
    envelope_corr_min: float = 0.95,
) -> ExperimentReport:
    """AM + wideband FM + pure sine through the full pipeline.

    Checks exact support detection, per-carrier error, the correlation of the
    recovered AM envelope against the programmed one, and the overlay of the
    three aliased carriers on the shared f_p-wide baseband.
    """
    if config is None:
        config = prototype_config()
    scenario = demo_scenario(seed=seed, snr_db=snr_db, duration_s=duration_s)
    config = config.resolved(scenario.f_max)

    t0 = time.perf_counter()
    result = run_pipeline(scenario, config, bank_seed=bank_seed)
    elapsed = time.perf_counter() - t0

    f_p = config.f_p
    L = result.matrix.L
    truth = true_support(scenario, f_p, L)
    detected = result.recovery.support
    exact = set(detected) == set(truth)

    true_carriers = sorted(b.carrier_hz for b in scenario.bands)
    est_carriers = sorted(result.recovery.carriers_hz)
    if len(est_carriers) == len(true_carriers):
        carrier_errors = [abs(e - t) for e, t in zip(est_carriers, true_carriers)]
    else:
        carrier_errors = [math.inf] * len(true_carriers)
    carriers_ok = all(e <= carrier_tol_hz for e in carrier_errors)

    # AM envelope: locate the slice group containing the AM carrier and
    # correlate the magnitude of its complex baseband with the programmed
    # envelope 1 + depth*cos(2*pi*rate*t)
    am_corr = 0.0
    slices = result.recovery.slices
    for group in positive_groups(detected):
        block = group_baseband(slices, group, f_p)
        if not (block.f_lo_hz <= DEMO_AM_CARRIER <= block.f_hi_hz):
            continue
        envelope = np.abs(block.baseband)
        t = np.arange(envelope.size) / block.sample_rate_hz
        reference = 1.0 + 0.5 * np.cos(2 * np.pi * DEMO_AM_ENVELOPE * t)
        am_corr = _pearson(envelope, reference)
        break
    envelope_ok = am_corr >= envelope_corr_min

    # aliased overlay: every carrier folds to (carrier mod f_p) on the common
    # baseband strip; verify the folded periodogram peaks there
    expected_offsets = [c % f_p for c in true_carriers]
    overlay_peaks: list[float] = []
    positive = [l for l in detected if l > 0]
    if positive and slices:
        n = len(next(iter(slices.values())))
        folded = np.zeros(n, dtype=complex)
        for l in positive:
            folded += slices[l]
        psd = np.abs(np.fft.fft(folded)) ** 2
        df = f_p / n
        half_window = max(int(round(0.5e6 / df)), 1)
        for off in expected_offsets:
            center = int(round(off / df)) % n
            lo = max(center - half_window, 0)
            hi = min(center + half_window + 1, n)
            k = lo + int(np.argmax(psd[lo:hi]))
            overlay_peaks.append(k * df)

    success = bool(exact and carriers_ok and envelope_ok)
    trial = TrialRecord(
        index=0,
        seed=seed,
        success=success,
        scenario=scenario.to_dict(),
        true_support=tuple(truth),
        detected_support=tuple(detected),
        wall_time_s=elapsed,
        detail={
            "exact_support": exact,
            "carrier_true_hz": true_carriers,
            "carrier_est_hz": list(est_carriers),
            "carrier_error_hz": [None if math.isinf(e) else e for e in carrier_errors],
            "am_envelope_correlation": am_corr,
            "baseband_offsets_hz": expected_offsets,
            "overlay_peak_offsets_hz": overlay_peaks,
            "timings_s": result.timings_s,
        },
    )
    aggregates = {
        "n_trials": 1,
        "n_success": int(success),
        "success_rate": float(success),
        "exact_support": exact,
        "carrier_error_hz_max": (
            None if any(math.isinf(e) for e in carrier_errors) else max(carrier_errors)
        ),
        "am_envelope_correlation": am_corr,
        "baseband_offsets_hz": expected_offsets,
    }
    return ExperimentReport(
        kind="mixture",
        config={
            "mwc": config.to_dict(),
            "carrier_tol_hz": carrier_tol_hz,
            "envelope_corr_min": envelope_corr_min,
            "snr_db": snr_db,
        },
        seeds={"seed": seed, "bank_seed": bank_seed},
        trials=[trial],
        aggregates=aggregates,
    )


# ---------------------------------------------------------------------------
# Monte Carlo curves


def mc_scenario(
    trial_seed: int,
    f_max: float = 1e9,
    duration_s: float = 3.4e-6,
    n_bands: int = 5,
    f_p: float = 20e6,
    snr_db: float | None = None,
) -> SignalScenario:
    """Random pure-sine multiband draw used by the Monte Carlo runs.

    Carriers are separated by more than 1.5 f_p so each transmission owns its
    slice pair, and amplitudes span a mild dynamic range. Each carrier is
    snapped to the record's frequency resolution (1/duration_s): a sine with
    an integer number of cycles over the record occupies exactly one bin, so
    the true support stays a well-defined slice set instead of smearing
    window sidelobes across the whole band.
    """
    rng = np.random.default_rng(np.random.SeedSequence([_MC_TAG, trial_seed]))
    bin_hz = 1.0 / duration_s
    carriers: list[float] = []
    while len(carriers) < n_bands:
        f = round(rng.uniform(0.05 * f_max, 0.97 * f_max) / bin_hz) * bin_hz
        if all(abs(f - g) > 1.5 * f_p for g in carriers):
            carriers.append(float(f))
    bands = tuple(
        BandSpec(carrier_hz=f, amplitude=float(rng.uniform(0.5, 1.5)))
        for f in sorted(carriers)
    )
    return SignalScenario(
        f_max=f_max,
        n_bands_max=2 * n_bands,
        band_width_max_hz=f_p,
        bands=bands,
        duration_s=duration_s,
        snr_db=snr_db,
        seed=trial_seed,
    )


def _mc_trial(args: tuple) -> TrialRecord:
    (index, trial_seed, scenario, config, sparsity, bank_seed, axis, value) = args
    t0 = time.perf_counter()
    result = run_pipeline(scenario, config, bank_seed=bank_seed, sparsity=sparsity)
    elapsed = time.perf_counter() - t0
    L = result.matrix.L
    truth = true_support(scenario, config.f_p, L)
    success = support_matches(result.recovery.support, scenario, config.f_p, L)
    return TrialRecord(
        index=index,
        seed=trial_seed,
        success=success,
        true_support=tuple(truth),
        detected_support=tuple(result.recovery.support),
        wall_time_s=elapsed,
        detail={"axis": axis, "value": value},
    )


def run_monte_carlo(
    axis: str,
    grid,
    trials_per_point: int = 50,
    seed: int = 0,
    config: MwcConfig | None = None,
    bank_seed: int = 0,
    f_max: float = 1e9,
    n_bands: int = 5,
    snr_db: float | None = None,
    workers: int = 0,
) -> ExperimentReport:
    """Success-rate curve along one axis with a shared trial set per point.

    The same scenarios and waveform banks are replayed at every grid point so
    curves differ only through the swept parameter.  Success uses the
    boundary-neighbor support rule (no carrier criterion).
    """
    if axis not in _MC_AXES:
        raise InvalidArgument(
            "unknown Monte Carlo axis", {"axis": axis, "choices": list(_MC_AXES)}
        )
    grid = list(grid)
    if not grid:
        raise InvalidArgument("empty grid", {"axis": axis})
    if trials_per_point < 1:
        raise InvalidArgument(
            "trials_per_point must be >= 1", {"trials_per_point": trials_per_point}
        )
    if config is None:
        config = prototype_config()
    config = config.resolved(f_max)

    # the record must hold the largest snapshot count ever requested, plus a
    # small margin for the expansion's even-length trim
    max_snapshots = config.n_snapshots
    if axis == "n_snapshots":
        max_snapshots = max(int(v) for v in grid)
    duration_s = (max_snapshots + 4) * config.t_p

    base_snr = snr_db
    trial_seeds = [
        int(s) for s in np.random.SeedSequence(seed).generate_state(trials_per_point)
    ]
    scenarios = [
        mc_scenario(
            ts, f_max=f_max, duration_s=duration_s, n_bands=n_bands,
            f_p=config.f_p, snr_db=base_snr,
        )
        for ts in trial_seeds
    ]

    n_cols = 2 * config.L + 1
    points: list[dict] = []
    trials: list[TrialRecord] = []
    index = 0
    for value in grid:
        point_config = config
        point_sparsity: int | None = None
        point_scenarios = scenarios
        if axis == "m":
            point_config = replace(config, m=int(value))
        elif axis == "n_snapshots":
            point_config = replace(config, n_snapshots=int(value))
        elif axis == "sparsity":
            point_sparsity = int(value)
            if point_sparsity > n_cols:
                points.append(
                    {
                        "value": value,
                        "rejected": True,
                        "reason": "sparsity exceeds the number of slice columns",
                        "n_cols": n_cols,
                    }
                )
                continue
        elif axis == "snr_db":
            point_scenarios = [replace(s, snr_db=float(value)) for s in scenarios]

        jobs = [
            (
                index + j,
                trial_seeds[j],
                point_scenarios[j],
                point_config,
                point_sparsity,
                bank_seed,
                axis,
                value,
            )
            for j in range(trials_per_point)
        ]
        if workers and workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                point_trials = list(pool.map(_mc_trial, jobs))
        else:
            point_trials = [_mc_trial(job) for job in jobs]
        point_trials.sort(key=lambda t: t.index)
        index += len(point_trials)
        trials.extend(point_trials)

        n_success = sum(t.success for t in point_trials)
        ci = wilson_ci(n_success, len(point_trials))
        points.append(
            {
                "value": value,
                "n_trials": len(point_trials),
                "n_success": n_success,
                "success_rate": n_success / len(point_trials),
                "success_ci95": list(ci),
            }
        )

    aggregates = {"axis": axis, "points": points}
    return ExperimentReport(
        kind="monte_carlo",
        config={
            "mwc": config.to_dict(),
            "axis": axis,
            "grid": list(grid),
            "trials_per_point": trials_per_point,
            "f_max_hz": f_max,
            "n_bands": n_bands,
            "snr_db": snr_db,
        },
        seeds={"seed": seed, "bank_seed": bank_seed},
        trials=trials,
        aggregates=aggregates,
    )


# ---------------------------------------------------------------------------
# timing


def time_sensing(
    config: MwcConfig | None = None,
    repetitions: int = 20,
    seed: int = 7,
    bank_seed: int = 0,
) -> ExperimentReport:
    """Wall-time distribution of the digital sensing stage.

    Synthesis and front-end simulation run once, outside the timed region;
    each repetition times support detection, slice recovery, and carrier
    estimation on the same snapshot block.
    """
    if repetitions < 1:
        raise InvalidArgument("repetitions must be >= 1", {"repetitions": repetitions})
    if config is None:
        config = prototype_config()
    scenario = demo_scenario(seed=seed, duration_s=config.n_snapshots * config.t_p)
    config = config.resolved(scenario.f_max)

    bank = gen_random_bank(config.m, config.m_chips, seed=bank_seed, period_s=config.t_p)
    grid_rate = choose_grid_rate(config, scenario.f_max)
    x = synthesize(scenario, grid_rate)
    raw = simulate_frontend(x, bank, config)
    samples = expand_channels(raw, config)
    matrix = build_matrix(bank, config)
    view = samples.truncated(min(samples.n_snapshots, config.n_snapshots))
    sparsity = min(2 * scenario.n_bands_max, matrix.n_cols)

    trials: list[TrialRecord] = []
    for i in range(repetitions):
        t0 = time.perf_counter()
        support, _ = detect_support_full(view, matrix, sparsity)
        if len(support):
            slices = recover_slices(view, matrix, support)
            estimate_carriers(slices, support, config.f_p)
        elapsed = time.perf_counter() - t0
        trials.append(
            TrialRecord(
                index=i,
                seed=seed,
                success=True,
                wall_time_s=elapsed,
                detected_support=tuple(support),
            )
        )

    times = np.array([t.wall_time_s for t in trials])
    aggregates = {
        "n_trials": repetitions,
        "mean_s": float(times.mean()),
        "median_s": float(np.median(times)),
        "p95_s": float(np.percentile(times, 95)),
        "n_snapshots": view.n_snapshots,
        "matrix_shape": [matrix.n_rows, matrix.n_cols],
    }
    return ExperimentReport(
        kind="timing",
        config={"mwc": config.to_dict(), "repetitions": repetitions},
        seeds={"seed": seed, "bank_seed": bank_seed},
        trials=trials,
        aggregates=aggregates,
    )


# ---------------------------------------------------------------------------
# CSV emission


def report_csvs(report: ExperimentReport) -> dict[str, str]:
    """Plot-ready CSV tables for a report, keyed by file name."""
    out: dict[str, str] = {}
    if report.kind == "sweep":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["frequency_hz", "success", "carrier_est_hz", "carrier_error_hz", "wall_time_s"])
        for t in report.trials:
            writer.writerow(
                [
                    f"{t.carrier_true_hz:.6f}",
                    int(t.success),
                    "" if t.carrier_est_hz is None else f"{t.carrier_est_hz:.6f}",
                    "" if t.carrier_error_hz is None else f"{t.carrier_error_hz:.6f}",
                    f"{t.wall_time_s:.6f}",
                ]
            )
        out["sweep.csv"] = buf.getvalue()
    elif report.kind == "monte_carlo":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["value", "n_trials", "n_success", "success_rate", "ci_lo", "ci_hi"])
        for point in report.aggregates["points"]:
            if point.get("rejected"):
                writer.writerow([point["value"], 0, 0, "", "", ""])
                continue
            lo, hi = point["success_ci95"]
            writer.writerow(
                [
                    point["value"],
                    point["n_trials"],
                    point["n_success"],
                    f"{point['success_rate']:.6f}",
                    f"{lo:.6f}",
                    f"{hi:.6f}",
                ]
            )
        out["montecarlo.csv"] = buf.getvalue()
    elif report.kind == "mixture":
        detail = report.trials[0].detail
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["carrier_true_hz", "carrier_est_hz", "carrier_error_hz", "baseband_offset_hz"])
        for true_c, est_c, err, off in zip(
            detail["carrier_true_hz"],
            detail["carrier_est_hz"],
            detail["carrier_error_hz"],
            detail["baseband_offsets_hz"],
        ):
            writer.writerow(
                [
                    f"{true_c:.6f}",
                    f"{est_c:.6f}",
                    "" if err is None else f"{err:.6f}",
                    f"{off:.6f}",
                ]
            )
        out["mixture_carriers.csv"] = buf.getvalue()
    elif report.kind == "timing":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["repetition", "wall_time_s"])
        for t in report.trials:
            writer.writerow([t.index, f"{t.wall_time_s:.6f}"])
        out["timing.csv"] = buf.getvalue()
    return out
