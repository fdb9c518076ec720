"""Sub-Nyquist spectrum sensing with a modulated wideband converter.

The package simulates the full chain: multiband scenario -> periodic-mixer
front end -> expanded low-rate samples -> joint-sparse support recovery ->
slice reconstruction and carrier estimation, plus an experiment harness, a
CLI, and a small HTTP service for the interactive explorer.
"""

from .errors import (
    InvalidArgument,
    InvalidConfig,
    InvalidScenario,
    MwcError,
    ReconstructionIllPosed,
)
from .frontend import (
    MwcConfig,
    RateReport,
    SampleMatrix,
    choose_grid_rate,
    expand_channels,
    simulate_frontend,
    slice_oracle,
    validate_config,
)
from .pipeline import PipelineResult, run_pipeline
from .presets import basic_config, demo_scenario, prototype_config, tone_scenario
from .reconstruct import (
    RecoveryResult,
    SliceGroup,
    estimate_carriers,
    group_baseband,
    positive_groups,
    reconstruct_signal,
    recover_slices,
)
from .recovery import (
    Frame,
    HoleMap,
    MmvSolution,
    RecoveryDiagnostics,
    build_frame,
    decompose,
    detect_support,
    detect_support_full,
    discarded_energy_fraction,
    solve_mmv,
    spectrum_holes,
)
from .sensing_matrix import (
    ConditioningReport,
    SensingMatrix,
    build_matrix,
    column_frequency,
    conditioning_report,
)
from .signals import (
    BandSpec,
    DenseSignal,
    SignalScenario,
    SupportSet,
    nyquist_rate,
    occupied_intervals,
    synthesize,
    true_support,
    validate_scenario,
)
from .waveforms import (
    ChipPattern,
    WaveformBank,
    fourier_coeffs,
    fourier_coeffs_at,
    gen_random_bank,
    gen_tapped_bank,
    render_bandlimited,
    render_dense,
)

__version__ = "0.1.0"

__all__ = [
    "BandSpec",
    "ChipPattern",
    "ConditioningReport",
    "DenseSignal",
    "Frame",
    "HoleMap",
    "InvalidArgument",
    "InvalidConfig",
    "InvalidScenario",
    "MmvSolution",
    "MwcConfig",
    "MwcError",
    "PipelineResult",
    "RateReport",
    "ReconstructionIllPosed",
    "RecoveryDiagnostics",
    "RecoveryResult",
    "SampleMatrix",
    "SensingMatrix",
    "SignalScenario",
    "SliceGroup",
    "SupportSet",
    "WaveformBank",
    "basic_config",
    "build_frame",
    "build_matrix",
    "choose_grid_rate",
    "column_frequency",
    "conditioning_report",
    "decompose",
    "demo_scenario",
    "detect_support",
    "detect_support_full",
    "discarded_energy_fraction",
    "estimate_carriers",
    "expand_channels",
    "fourier_coeffs",
    "fourier_coeffs_at",
    "gen_random_bank",
    "gen_tapped_bank",
    "group_baseband",
    "nyquist_rate",
    "occupied_intervals",
    "positive_groups",
    "prototype_config",
    "reconstruct_signal",
    "recover_slices",
    "render_bandlimited",
    "render_dense",
    "run_pipeline",
    "simulate_frontend",
    "slice_oracle",
    "solve_mmv",
    "spectrum_holes",
    "synthesize",
    "tone_scenario",
    "true_support",
    "validate_config",
    "validate_scenario",
    "__version__",
]
