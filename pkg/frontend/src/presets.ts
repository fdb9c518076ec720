/** Built-in starting points mirroring the service's own presets. */

import type { ConfigDoc, ScenarioDoc } from "./types.js";

/** Three-transmission mixture: AM at 807.8 MHz, FM at 631.2 MHz, sine at 981.9 MHz. */
export const DEMO_SCENARIO: ScenarioDoc = {
  f_max: 1_000_000_000,
  n_bands_max: 6,
  band_width_max_hz: 20_000_000,
  bands: [
    {
      carrier_hz: 807_800_000,
      bandwidth_hz: 200_000,
      amplitude: 1.0,
      modulation: "am",
      mod_params: { envelope_rate_hz: 100_000, depth: 0.5 },
    },
    {
      carrier_hz: 631_200_000,
      bandwidth_hz: 3_020_000,
      amplitude: 1.0,
      modulation: "fm",
      mod_params: { deviation_hz: 1_500_000, rate_hz: 10_000 },
    },
    {
      carrier_hz: 981_900_000,
      bandwidth_hz: 0,
      amplitude: 1.0,
      modulation: "pure_sine",
      mod_params: {},
    },
  ],
  duration_s: 0.001,
  snr_db: null,
  seed: 7,
};

/** 4 physical channels collapsed q=3, 70 MHz ADCs: 280 MHz total. */
export const PROTOTYPE_CONFIG: ConfigDoc = {
  m: 4,
  q: 3,
  f_p: 20_000_000,
  m_chips: 108,
  n_snapshots: 64,
  f_s: 60_000_000,
  adc_rate_hz: 70_000_000,
  L: 55,
  l_cut: null,
};

/** One channel per needed alias diversity slot, no collapsing. */
export const BASIC_CONFIG: ConfigDoc = {
  m: 24,
  q: 1,
  f_p: 20_000_000,
  m_chips: 108,
  n_snapshots: 64,
  f_s: 20_000_000,
  adc_rate_hz: null,
  L: null,
  l_cut: null,
};

export const EMPTY_SCENARIO: ScenarioDoc = {
  f_max: 1_000_000_000,
  n_bands_max: 6,
  band_width_max_hz: 20_000_000,
  bands: [],
  duration_s: 0.001,
  snr_db: null,
  seed: 0,
};

export function cloneScenario(doc: ScenarioDoc): ScenarioDoc {
  return JSON.parse(JSON.stringify(doc)) as ScenarioDoc;
}

export function cloneConfig(doc: ConfigDoc): ConfigDoc {
  return JSON.parse(JSON.stringify(doc)) as ConfigDoc;
}
