/** JSON documents exchanged with the sensing service (/v1). */

export type Modulation = "pure_sine" | "am" | "fm";

export interface BandDoc {
  carrier_hz: number;
  bandwidth_hz: number;
  amplitude: number;
  modulation: Modulation;
  mod_params: Record<string, number>;
}

export interface ScenarioDoc {
  f_max: number;
  n_bands_max: number;
  band_width_max_hz: number;
  bands: BandDoc[];
  duration_s: number;
  snr_db: number | null;
  seed: number;
}

export interface ConfigDoc {
  m: number;
  q: number;
  f_p: number;
  m_chips: number;
  n_snapshots: number;
  /** derived, always q * f_p; kept in the document for the service */
  f_s?: number | null;
  /** physical per-channel rate; null means exactly f_s */
  adc_rate_hz?: number | null;
  /** slice index bound; null lets the service derive it from f_max */
  L?: number | null;
  l_cut?: number | null;
}

export interface PlotSeries {
  frequency_hz: number[];
  power_db: number[];
}

export interface RateDoc {
  total_sample_rate_hz: number;
  nyquist_rate_hz: number;
  ratio_to_nyquist: number;
  basic_config_pass: boolean;
  chip_rate_pass: boolean;
  coverage_pass: boolean;
  four_nb_hz: number;
  notes: string[];
}

export interface SampleSummary {
  run_id?: string;
  stage?: number;
  rates: RateDoc;
  basic_config: boolean;
  matrix_shape: [number, number];
  n_snapshots: number;
  digests: { samples: string; sensing_matrix: string; bank: string };
  plots: { input_psd: PlotSeries; baseband_psd: PlotSeries };
}

export interface RecoverSummary {
  run_id?: string;
  stage?: number;
  support: number[];
  true_support: number[];
  holes_hz: [number, number][];
  holes_positive_hz: [number, number][];
  sparsity: number;
  diagnostics: {
    kept_eigenvalues: number[];
    residual_curve: number[];
    n_iterations: number;
    wall_time_s: number;
    rank_deficient: boolean;
    whitened: boolean;
    eps_res_used: number;
  };
}

export interface BandCorrelation {
  carrier_hz: number;
  correlation: number;
}

export interface ReconstructSummary {
  run_id?: string;
  stage?: number;
  cached?: boolean;
  carriers_hz: number[];
  band_correlations: BandCorrelation[];
  rms: number;
  sample_rate_hz: number;
  duration_s: number;
  digests: { reconstruction: string };
  artifacts: { waveform: string };
}

export interface RunView {
  run_id: string;
  created_at: number;
  stage: number;
  scenario: ScenarioDoc;
  sample: SampleSummary | null;
  recover: RecoverSummary | null;
  reconstruct: ReconstructSummary | null;
  artifacts: string[];
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  details: unknown;
}

/** Saved session document for export/import (config round-trip). */
export interface ExportDoc {
  scenario: ScenarioDoc;
  config: ConfigDoc;
  bank_seed: number;
  sparsity: number | null;
}
