import { describe, expect, it } from "vitest";

import { configErrors, derivedFs, fmtHz, rateMeter, scenarioErrors } from "../src/forms.js";
import { BASIC_CONFIG, DEMO_SCENARIO, PROTOTYPE_CONFIG, cloneConfig, cloneScenario } from "../src/presets.js";

describe("scenarioErrors", () => {
  it("accepts the demo mixture", () => {
    expect(scenarioErrors(DEMO_SCENARIO)).toEqual([]);
  });

  it("flags a band whose carrier sits above f_max", () => {
    const doc = cloneScenario(DEMO_SCENARIO);
    doc.bands[0].carrier_hz = 1.2e9; // f_max is 1 GHz
    const errors = scenarioErrors(doc);
    expect(errors).toHaveLength(1);
    expect(errors[0].field).toBe("bands[0].carrier_hz");
    expect(errors[0].message).toContain("past f_max");
  });

  it("flags a band edge that crosses f_max even when the carrier is inside", () => {
    const doc = cloneScenario(DEMO_SCENARIO);
    doc.bands[1].carrier_hz = 0.999e9;
    doc.bands[1].bandwidth_hz = 10e6;
    expect(scenarioErrors(doc).some((e) => e.message.includes("past f_max"))).toBe(true);
  });

  it("flags more bands than the sparsity model allows", () => {
    const doc = cloneScenario(DEMO_SCENARIO);
    doc.n_bands_max = 2; // demo holds 3 bands
    const errors = scenarioErrors(doc);
    expect(errors.some((e) => e.field === "bands")).toBe(true);
  });

  it("flags a band wider than the per-band limit", () => {
    const doc = cloneScenario(DEMO_SCENARIO);
    doc.bands[1].bandwidth_hz = doc.band_width_max_hz * 2;
    expect(
      scenarioErrors(doc).some(
        (e) => e.field === "bands[1].bandwidth_hz" && e.message.includes("limit"),
      ),
    ).toBe(true);
  });

  it("checks modulation parameters", () => {
    const doc = cloneScenario(DEMO_SCENARIO);
    doc.bands[0].mod_params.depth = 1.5; // AM band
    expect(scenarioErrors(doc).some((e) => e.message.includes("depth"))).toBe(true);
  });

  it("an empty scenario is structurally valid (gating handles the rest)", () => {
    const doc = cloneScenario(DEMO_SCENARIO);
    doc.bands = [];
    expect(scenarioErrors(doc)).toEqual([]);
  });
});

describe("configErrors", () => {
  it("accepts both preset configs against the demo scenario", () => {
    expect(configErrors(PROTOTYPE_CONFIG, DEMO_SCENARIO)).toEqual([]);
    expect(configErrors(BASIC_CONFIG, DEMO_SCENARIO)).toEqual([]);
  });

  it("rejects a chip rate that cannot reach f_max", () => {
    const cfg = cloneConfig(PROTOTYPE_CONFIG);
    cfg.m_chips = 10; // 10 * 20 MHz = 200 MHz < 2 GHz
    const errors = configErrors(cfg, DEMO_SCENARIO);
    expect(errors.some((e) => e.field === "m_chips")).toBe(true);
  });

  it("rejects an ADC slower than the derived channel rate", () => {
    const cfg = cloneConfig(PROTOTYPE_CONFIG);
    cfg.adc_rate_hz = 10e6; // below q * f_p = 60 MHz
    expect(configErrors(cfg, DEMO_SCENARIO).some((e) => e.field === "adc_rate_hz")).toBe(true);
  });

  it("rejects non-integer channel counts", () => {
    const cfg = cloneConfig(PROTOTYPE_CONFIG);
    cfg.m = 2.5;
    expect(configErrors(cfg, DEMO_SCENARIO).some((e) => e.field === "m")).toBe(true);
  });
});

describe("rateMeter", () => {
  it("reports 280 MHz total and 14% of Nyquist for the prototype", () => {
    const meter = rateMeter(PROTOTYPE_CONFIG, DEMO_SCENARIO);
    // 4 channels, each at the 70 MHz ADC rate (above q * f_p = 60 MHz)
    expect(meter.perChannelHz).toBe(70e6);
    expect(meter.totalHz).toBe(280e6);
    expect(meter.nyquistHz).toBe(2e9);
    expect(meter.ratioToNyquist).toBeCloseTo(0.14, 10);
    expect(meter.basicConfig).toBe(false);
  });

  it("falls back to q * f_p when no separate ADC rate is set", () => {
    const cfg = cloneConfig(PROTOTYPE_CONFIG);
    cfg.adc_rate_hz = null;
    const meter = rateMeter(cfg, DEMO_SCENARIO);
    expect(meter.perChannelHz).toBe(derivedFs(cfg));
    expect(meter.totalHz).toBe(4 * 60e6);
  });

  it("lights the basic-config badge for m=24, q=1 on the demo scenario", () => {
    // q = 1, f_p = 20 MHz >= B = 20 MHz, m = 24 >= 4 * 6
    const meter = rateMeter(BASIC_CONFIG, DEMO_SCENARIO);
    expect(meter.basicConfig).toBe(true);
  });

  it("drops the badge when the channel count falls short", () => {
    const cfg = cloneConfig(BASIC_CONFIG);
    cfg.m = 23;
    expect(rateMeter(cfg, DEMO_SCENARIO).basicConfig).toBe(false);
  });
});

describe("fmtHz", () => {
  it("picks sensible units", () => {
    expect(fmtHz(280e6)).toBe("280 MHz");
    expect(fmtHz(1e9)).toBe("1 GHz");
    expect(fmtHz(60e6)).toBe("60 MHz");
    expect(fmtHz(100e3)).toBe("100 kHz");
    expect(fmtHz(5)).toBe("5 Hz");
  });
});
