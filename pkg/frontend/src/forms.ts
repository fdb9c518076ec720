/** Form-level validation and the live rate meter.
 *
 * These mirror the service's checks only to give immediate feedback;
 * the server remains the source of truth and re-validates everything.
 */

import type { ConfigDoc, ScenarioDoc } from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

export function scenarioErrors(doc: ScenarioDoc): FieldError[] {
  const errors: FieldError[] = [];
  if (!(doc.f_max > 0)) {
    errors.push({ field: "f_max", message: "f_max must be positive" });
  }
  if (!Number.isInteger(doc.n_bands_max) || doc.n_bands_max < 1) {
    errors.push({ field: "n_bands_max", message: "must be a positive integer" });
  }
  if (!(doc.band_width_max_hz > 0)) {
    errors.push({ field: "band_width_max_hz", message: "must be positive" });
  }
  if (!(doc.duration_s > 0)) {
    errors.push({ field: "duration_s", message: "must be positive" });
  }
  if (doc.bands.length > doc.n_bands_max) {
    errors.push({
      field: "bands",
      message: `${doc.bands.length} bands exceed the limit of ${doc.n_bands_max}`,
    });
  }
  doc.bands.forEach((band, i) => {
    const at = `bands[${i}]`;
    if (!(band.carrier_hz > 0)) {
      errors.push({ field: `${at}.carrier_hz`, message: "carrier must be positive" });
    }
    if (band.bandwidth_hz < 0) {
      errors.push({ field: `${at}.bandwidth_hz`, message: "bandwidth cannot be negative" });
    }
    if (band.bandwidth_hz > doc.band_width_max_hz) {
      errors.push({
        field: `${at}.bandwidth_hz`,
        message: `wider than the ${fmtHz(doc.band_width_max_hz)} per-band limit`,
      });
    }
    if (band.carrier_hz + band.bandwidth_hz / 2 > doc.f_max) {
      errors.push({
        field: `${at}.carrier_hz`,
        message: `band extends past f_max = ${fmtHz(doc.f_max)}`,
      });
    }
    if (band.carrier_hz - band.bandwidth_hz / 2 < 0) {
      errors.push({ field: `${at}.carrier_hz`, message: "band extends below 0 Hz" });
    }
    if (!(band.amplitude > 0)) {
      errors.push({ field: `${at}.amplitude`, message: "amplitude must be positive" });
    }
    if (band.modulation === "am") {
      const rate = band.mod_params.envelope_rate_hz ?? 0;
      const depth = band.mod_params.depth ?? 0.5;
      if (!(rate > 0)) {
        errors.push({ field: `${at}.mod_params`, message: "AM needs envelope_rate_hz > 0" });
      }
      if (!(depth > 0 && depth <= 1)) {
        errors.push({ field: `${at}.mod_params`, message: "AM depth must be in (0, 1]" });
      }
    }
    if (band.modulation === "fm") {
      if ((band.mod_params.deviation_hz ?? -1) < 0) {
        errors.push({ field: `${at}.mod_params`, message: "FM needs deviation_hz >= 0" });
      }
      if (!((band.mod_params.rate_hz ?? 0) > 0)) {
        errors.push({ field: `${at}.mod_params`, message: "FM needs rate_hz > 0" });
      }
    }
  });
  return errors;
}

export function derivedFs(config: ConfigDoc): number {
  return config.q * config.f_p;
}

export function configErrors(config: ConfigDoc, scenario: ScenarioDoc): FieldError[] {
  const errors: FieldError[] = [];
  for (const field of ["m", "q", "m_chips", "n_snapshots"] as const) {
    const v = config[field];
    if (!Number.isInteger(v) || v < 1) {
      errors.push({ field, message: "must be a positive integer" });
    }
  }
  if (!(config.f_p > 0)) {
    errors.push({ field: "f_p", message: "f_p must be positive" });
  }
  if (config.n_snapshots < 2) {
    errors.push({ field: "n_snapshots", message: "need at least 2 snapshots" });
  }
  const chipRate = config.m_chips * config.f_p;
  if (chipRate < 2 * scenario.f_max) {
    errors.push({
      field: "m_chips",
      message:
        `chip rate ${fmtHz(chipRate)} cannot alias content above ` +
        `${fmtHz(chipRate / 2)}; need m_chips * f_p >= ${fmtHz(2 * scenario.f_max)}`,
    });
  }
  if (config.adc_rate_hz != null && config.adc_rate_hz < derivedFs(config)) {
    errors.push({
      field: "adc_rate_hz",
      message: `ADC rate is below the required f_s = q * f_p = ${fmtHz(derivedFs(config))}`,
    });
  }
  return errors;
}

export interface RateMeter {
  perChannelHz: number;
  totalHz: number;
  nyquistHz: number;
  ratioToNyquist: number;
  basicConfig: boolean;
}

/** Live meter shown while the user drags sliders; the server's rate
 * report replaces these numbers once sampling runs. */
export function rateMeter(config: ConfigDoc, scenario: ScenarioDoc): RateMeter {
  const fs = derivedFs(config);
  const perChannel = Math.max(config.adc_rate_hz ?? 0, fs);
  const total = config.m * perChannel;
  const nyquist = 2 * scenario.f_max;
  const basic =
    config.q === 1 &&
    config.f_p >= scenario.band_width_max_hz &&
    config.m >= 4 * scenario.n_bands_max;
  return {
    perChannelHz: perChannel,
    totalHz: total,
    nyquistHz: nyquist,
    ratioToNyquist: total / nyquist,
    basicConfig: basic,
  };
}

export function fmtHz(hz: number): string {
  const abs = Math.abs(hz);
  if (abs >= 1e9) return `${trim(hz / 1e9)} GHz`;
  if (abs >= 1e6) return `${trim(hz / 1e6)} MHz`;
  if (abs >= 1e3) return `${trim(hz / 1e3)} kHz`;
  return `${trim(hz)} Hz`;
}

function trim(v: number): string {
  return Number(v.toFixed(3)).toString();
}
