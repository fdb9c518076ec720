"""End-to-end runs: scenario and config in, support/holes/slices/carriers out."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .frontend import (
    MwcConfig,
    SampleMatrix,
    choose_grid_rate,
    expand_channels,
    simulate_frontend,
)
from .reconstruct import (
    RecoveryResult,
    estimate_carriers,
    reconstruct_signal,
    recover_slices,
)
from .recovery import detect_support_full, spectrum_holes
from .sensing_matrix import SensingMatrix, build_matrix
from .signals import DenseSignal, SignalScenario, validate_scenario, synthesize
from .waveforms import WaveformBank, gen_random_bank


@dataclass
class PipelineResult:
    scenario: SignalScenario
    config: MwcConfig
    bank: WaveformBank
    grid_rate_hz: float
    signal: DenseSignal
    samples: SampleMatrix
    matrix: SensingMatrix
    recovery: RecoveryResult
    reconstruction: DenseSignal | None
    timings_s: dict = field(default_factory=dict)


def run_pipeline(
    scenario: SignalScenario,
    config: MwcConfig,
    bank: WaveformBank | None = None,
    bank_seed: int = 0,
    grid_rate: float | None = None,
    sparsity: int | None = None,
    rel_tol: float = 1e-4,
    eps_res: float | None = None,
    symmetrize: bool = True,
    whiten: bool = True,
    normalize: bool | str = "projected",
    reconstruct: bool = False,
) -> PipelineResult:
    """Synthesize, sample, detect, and optionally rebuild the dense waveform.

    Detection sees at most config.n_snapshots snapshot columns; slice
    recovery and reconstruction use the full record.
    """
    validate_scenario(scenario)
    config = config.resolved(scenario.f_max)
    if bank is None:
        bank = gen_random_bank(
            config.m, config.m_chips, seed=bank_seed, period_s=config.t_p
        )
    if grid_rate is None:
        grid_rate = choose_grid_rate(config, scenario.f_max)

    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    x = synthesize(scenario, grid_rate)
    timings["synthesis_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    raw = simulate_frontend(x, bank, config)
    samples = expand_channels(raw, config)
    timings["frontend_s"] = time.perf_counter() - t0

    matrix = build_matrix(bank, config)
    if sparsity is None:
        sparsity = min(2 * scenario.n_bands_max, matrix.n_cols)

    t0 = time.perf_counter()
    detect_view = samples.truncated(min(samples.n_snapshots, config.n_snapshots))
    support, diagnostics = detect_support_full(
        detect_view,
        matrix,
        sparsity,
        rel_tol=rel_tol,
        eps_res=eps_res,
        symmetrize=symmetrize,
        whiten=whiten,
        normalize=normalize,
    )
    slices: dict = {}
    carriers: tuple[float, ...] = ()
    if len(support):
        slices = recover_slices(samples, matrix, support)
        carriers = estimate_carriers(slices, support, config.f_p)
    timings["sensing_s"] = time.perf_counter() - t0

    holes = spectrum_holes(support, config.f_p, matrix.L)
    recovery = RecoveryResult(
        support=support,
        holes=holes,
        slices=slices,
        carriers_hz=carriers,
        diagnostics=diagnostics,
    )

    reconstruction = None
    if reconstruct:
        t0 = time.perf_counter()
        if len(support):
            n = len(next(iter(slices.values())))
            duration = n / config.f_p
            reconstruction = reconstruct_signal(
                slices, support, config.f_p, grid_rate, duration
            )
        else:
            reconstruction = DenseSignal(
                sample_rate_hz=grid_rate,
                samples=np.zeros(x.n_samples),
            )
        timings["reconstruct_s"] = time.perf_counter() - t0

    return PipelineResult(
        scenario=scenario,
        config=config,
        bank=bank,
        grid_rate_hz=grid_rate,
        signal=x,
        samples=samples,
        matrix=matrix,
        recovery=recovery,
        reconstruction=reconstruction,
        timings_s=timings,
    )
