/** Page wiring for the four-stage explorer. All state lives in the
 * StageViewModel; this module renders it and forwards user actions. */

import { SensingClient } from "./api.js";
import { runStage } from "./controller.js";
import {
  configErrors,
  derivedFs,
  fmtHz,
  rateMeter,
  scenarioErrors,
} from "./forms.js";
import { StageViewModel, type StageNumber } from "./model.js";
import {
  bandDiagram,
  holeRows,
  linePlot,
  supportOverlayRows,
  traceFromFloat64,
} from "./plots.js";
import {
  BASIC_CONFIG,
  DEMO_SCENARIO,
  EMPTY_SCENARIO,
  PROTOTYPE_CONFIG,
  cloneConfig,
  cloneScenario,
} from "./presets.js";
import type { BandDoc, Modulation } from "./types.js";

const vm = new StageViewModel(DEMO_SCENARIO, PROTOTYPE_CONFIG);
let client = new SensingClient(defaultBase());
let lastAttempt: StageNumber | null = null;
let traceSvg = "";

function defaultBase(): string {
  return localStorage.getItem("mwcsense-api") ?? "http://127.0.0.1:8000";
}

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

async function attempt(stage: StageNumber): Promise<void> {
  lastAttempt = stage;
  render();
  const ok = await runStage(vm, client, stage);
  if (ok && stage === 4) {
    await loadTrace();
  }
  render();
}

async function loadTrace(): Promise<void> {
  traceSvg = "";
  const recon = vm.reconstruct.data;
  if (!vm.runId || !recon) return;
  try {
    const buf = await client.artifact(vm.runId, "reconstruction.bin");
    const series = traceFromFloat64(buf, recon.sample_rate_hz);
    traceSvg = linePlot([series], {
      title: "reconstruction, first samples",
      xLabel: "time (us)",
      yLabel: "amplitude",
      xScale: 1e-6,
    });
  } catch {
    traceSvg = "";
  }
}

// ---------------------------------------------------------------------------
// stage 1: scenario editor

function renderScenario(): void {
  const s = vm.scenario;
  const errors = scenarioErrors(s);
  const errorFor = (field: string) =>
    errors
      .filter((e) => e.field === field)
      .map((e) => `<span class="field-error">${e.message}</span>`)
      .join("");

  const bandRows = s.bands
    .map((band, i) => {
      const at = `bands[${i}]`;
      const fieldErrs = errors.filter((e) => e.field.startsWith(at));
      const modParams =
        band.modulation === "am"
          ? `<label>envelope kHz <input data-band="${i}" data-key="envelope_rate_hz" data-scale="1e3" type="number" step="any" value="${(band.mod_params.envelope_rate_hz ?? 0) / 1e3}"></label>
             <label>depth <input data-band="${i}" data-key="depth" data-scale="1" type="number" step="0.05" value="${band.mod_params.depth ?? 0.5}"></label>`
          : band.modulation === "fm"
            ? `<label>deviation kHz <input data-band="${i}" data-key="deviation_hz" data-scale="1e3" type="number" step="any" value="${(band.mod_params.deviation_hz ?? 0) / 1e3}"></label>
               <label>rate kHz <input data-band="${i}" data-key="rate_hz" data-scale="1e3" type="number" step="any" value="${(band.mod_params.rate_hz ?? 0) / 1e3}"></label>`
            : "";
      return `<div class="band-row">
        <label>carrier MHz <input data-band="${i}" data-key="carrier_hz" data-scale="1e6" type="number" step="any" value="${band.carrier_hz / 1e6}"></label>
        <label>width MHz <input data-band="${i}" data-key="bandwidth_hz" data-scale="1e6" type="number" step="any" value="${band.bandwidth_hz / 1e6}"></label>
        <label>amp <input data-band="${i}" data-key="amplitude" data-scale="1" type="number" step="0.1" value="${band.amplitude}"></label>
        <label>mod <select data-band="${i}" data-key="modulation">
          ${(["pure_sine", "am", "fm"] as Modulation[])
            .map((m) => `<option value="${m}" ${m === band.modulation ? "selected" : ""}>${m}</option>`)
            .join("")}
        </select></label>
        ${modParams}
        <button data-action="remove-band" data-band="${i}">remove</button>
        ${fieldErrs.map((e) => `<span class="field-error">${e.message}</span>`).join("")}
      </div>`;
    })
    .join("");

  $("scenario-body").innerHTML = `
    <div class="preset-row">
      <button data-action="preset-demo">demo mixture</button>
      <button data-action="preset-empty">empty scenario</button>
    </div>
    <div class="field-grid">
      <label>f_max MHz <input id="sc-f_max" data-scale="1e6" type="number" step="any" value="${s.f_max / 1e6}">${errorFor("f_max")}</label>
      <label>max bands N <input id="sc-n_bands_max" type="number" step="1" value="${s.n_bands_max}">${errorFor("n_bands_max")}</label>
      <label>max width B MHz <input id="sc-band_width_max_hz" data-scale="1e6" type="number" step="any" value="${s.band_width_max_hz / 1e6}">${errorFor("band_width_max_hz")}</label>
      <label>duration ms <input id="sc-duration_s" data-scale="1e-3" type="number" step="any" value="${s.duration_s / 1e-3}">${errorFor("duration_s")}</label>
      <label>SNR dB (blank = noiseless) <input id="sc-snr_db" type="number" step="any" value="${s.snr_db ?? ""}"></label>
      <label>seed <input id="sc-seed" type="number" step="1" value="${s.seed}"></label>
    </div>
    <div id="bands">${bandRows || '<p class="hint">no transmissions defined</p>'}</div>
    <button data-action="add-band">add band</button>
    ${errorFor("bands")}
    <div class="run-row">
      <button data-action="run-1" ${vm.canRun(1) ? "" : "disabled"}>1. create run</button>
      <span class="gate-reason">${vm.gateReason(1) ?? ""}</span>
      <span class="stage-status status-${vm.create.status}">${vm.create.status}${vm.runId ? ` (run ${vm.runId.slice(0, 8)})` : ""}</span>
    </div>`;
}

function readScenarioForm(): void {
  const doc = cloneScenario(vm.scenario);
  doc.f_max = scaled("sc-f_max");
  doc.n_bands_max = int("sc-n_bands_max");
  doc.band_width_max_hz = scaled("sc-band_width_max_hz");
  doc.duration_s = scaled("sc-duration_s");
  const snr = (document.getElementById("sc-snr_db") as HTMLInputElement).value;
  doc.snr_db = snr === "" ? null : Number(snr);
  doc.seed = int("sc-seed");
  vm.setScenario(doc);
}

function scaled(id: string): number {
  const el = document.getElementById(id) as HTMLInputElement;
  return Number(el.value) * Number(el.dataset.scale ?? 1);
}

function int(id: string): number {
  return Math.round(Number((document.getElementById(id) as HTMLInputElement).value));
}

function updateBand(index: number, key: string, el: HTMLInputElement | HTMLSelectElement): void {
  const doc = cloneScenario(vm.scenario);
  const band: BandDoc = doc.bands[index];
  if (key === "modulation") {
    band.modulation = el.value as Modulation;
    band.mod_params =
      band.modulation === "am"
        ? { envelope_rate_hz: 100_000, depth: 0.5 }
        : band.modulation === "fm"
          ? { deviation_hz: 1_000_000, rate_hz: 10_000 }
          : {};
  } else if (key === "carrier_hz" || key === "bandwidth_hz" || key === "amplitude") {
    band[key] = Number((el as HTMLInputElement).value) * Number(el.dataset.scale ?? 1);
  } else {
    band.mod_params[key] =
      Number((el as HTMLInputElement).value) * Number(el.dataset.scale ?? 1);
  }
  vm.setScenario(doc);
}

// ---------------------------------------------------------------------------
// stage 2: converter parameters

function renderConfig(): void {
  const c = vm.config;
  const errors = configErrors(c, vm.scenario);
  const meter = rateMeter(c, vm.scenario);
  const sample = vm.sample.data;
  const serverRates = sample ? sample.rates : null;
  const totalHz = serverRates ? serverRates.total_sample_rate_hz : meter.totalHz;
  const ratio = serverRates ? serverRates.ratio_to_nyquist : meter.ratioToNyquist;
  const basic = serverRates ? serverRates.basic_config_pass : meter.basicConfig;

  $("config-body").innerHTML = `
    <div class="preset-row">
      <button data-action="preset-prototype">prototype (4ch, q=3)</button>
      <button data-action="preset-basic">basic (24ch, q=1)</button>
    </div>
    <div class="field-grid">
      <label>channels m <input id="cf-m" type="number" step="1" min="1" value="${c.m}"></label>
      <label>collapsing q <input id="cf-q" type="number" step="1" min="1" value="${c.q}"></label>
      <label>f_p MHz <input id="cf-f_p" data-scale="1e6" type="number" step="any" value="${c.f_p / 1e6}"></label>
      <label>chips per period <input id="cf-m_chips" type="number" step="1" min="1" value="${c.m_chips}"></label>
      <label>snapshots <input id="cf-n_snapshots" type="number" step="1" min="2" value="${c.n_snapshots}"></label>
      <label>ADC rate MHz (blank = f_s) <input id="cf-adc" data-scale="1e6" type="number" step="any" value="${c.adc_rate_hz != null ? c.adc_rate_hz / 1e6 : ""}"></label>
      <label>bank seed <input id="cf-bank-seed" type="number" step="1" value="${vm.bankSeed}"></label>
    </div>
    <p class="derived">derived f_s = q * f_p = <b>${fmtHz(derivedFs(c))}</b> per channel</p>
    <div class="rate-meter ${errors.length ? "meter-invalid" : ""}">
      <b>${fmtHz(totalHz)}</b> total
      = <b>${(ratio * 100).toFixed(1)}%</b> of Nyquist (${fmtHz(meter.nyquistHz)})
      ${basic ? '<span class="badge badge-basic">basic config</span>' : ""}
      ${serverRates ? '<span class="badge badge-server">server-confirmed</span>' : ""}
    </div>
    ${errors.map((e) => `<span class="field-error">${e.field}: ${e.message}</span>`).join("")}
    <div class="run-row">
      <button data-action="run-2" ${vm.canRun(2) ? "" : "disabled"}>2. sample</button>
      <span class="gate-reason">${vm.gateReason(2) ?? ""}</span>
      <span class="stage-status status-${vm.sample.status}">${vm.sample.status}</span>
    </div>
    <div id="sample-results">${renderSampleResults()}</div>`;
}

function renderSampleResults(): string {
  const data = vm.sample.data;
  if (!data) return "";
  const psd = linePlot(
    [
      {
        x: data.plots.input_psd.frequency_hz,
        y: data.plots.input_psd.power_db,
        label: "input PSD",
      },
    ],
    { title: "input spectrum", xLabel: "frequency (MHz)", yLabel: "dB", xScale: 1e6 },
  );
  const baseband = linePlot(
    [
      {
        x: data.plots.baseband_psd.frequency_hz,
        y: data.plots.baseband_psd.power_db,
        label: "aliased baseband",
      },
    ],
    {
      title: "low-rate channel spectrum (everything folds here)",
      xLabel: "frequency (MHz)",
      yLabel: "dB",
      xScale: 1e6,
    },
  );
  return `
    <p>matrix ${data.matrix_shape[0]} x ${data.matrix_shape[1]}, ${data.n_snapshots} snapshots;
    digests: samples <code>${data.digests.samples.slice(0, 12)}</code>,
    matrix <code>${data.digests.sensing_matrix.slice(0, 12)}</code>,
    bank <code>${data.digests.bank.slice(0, 12)}</code></p>
    ${psd}${baseband}`;
}

function readConfigForm(): void {
  const doc = cloneConfig(vm.config);
  doc.m = int("cf-m");
  doc.q = int("cf-q");
  doc.f_p = scaled("cf-f_p");
  doc.m_chips = int("cf-m_chips");
  doc.n_snapshots = int("cf-n_snapshots");
  const adc = (document.getElementById("cf-adc") as HTMLInputElement).value;
  doc.adc_rate_hz = adc === "" ? null : Number(adc) * 1e6;
  doc.f_s = doc.q * doc.f_p;
  // the slice bound depends on f_p and f_max; let the server re-derive it
  doc.L = null;
  vm.setConfig(doc);
  vm.setBankSeed(int("cf-bank-seed"));
}

// ---------------------------------------------------------------------------
// stage 3 and 4: results

function renderRecover(): void {
  const data = vm.recover.data;
  let results = "";
  if (data) {
    const overlay = bandDiagram(
      supportOverlayRows(data.support, data.true_support, vm.config.f_p, vm.scenario.f_max),
      0,
      vm.scenario.f_max,
      { title: "occupied slices: true vs detected" },
    );
    const holes = bandDiagram(holeRows(data.holes_positive_hz, vm.scenario.f_max), 0, vm.scenario.f_max, {
      title: "spectrum holes (light = free for secondary use)",
    });
    const mism =
      JSON.stringify(data.support) === JSON.stringify(data.true_support)
        ? '<span class="badge badge-basic">exact support</span>'
        : '<span class="badge badge-mismatch">support mismatch</span>';
    results = `
      <p>detected ${data.support.length} slices (sparsity budget ${data.sparsity}) ${mism}<br>
      support: <code>[${data.support.join(", ")}]</code><br>
      ${data.diagnostics.n_iterations} iterations, ${(data.diagnostics.wall_time_s * 1e3).toFixed(1)} ms,
      whitened=${data.diagnostics.whitened}</p>
      ${overlay}${holes}`;
  }
  $("recover-body").innerHTML = `
    <label>sparsity override (blank = 2N)
      <input id="rc-sparsity" type="number" step="1" min="0" value="${vm.sparsity ?? ""}">
    </label>
    <div class="run-row">
      <button data-action="run-3" ${vm.canRun(3) ? "" : "disabled"}>3. recover support</button>
      <span class="gate-reason">${vm.gateReason(3) ?? ""}</span>
      <span class="stage-status status-${vm.recover.status}">${vm.recover.status}</span>
    </div>
    <div id="recover-results">${results}</div>`;
}

function renderReconstruct(): void {
  const data = vm.reconstruct.data;
  let results = "";
  if (data) {
    const trueCarriers = vm.scenario.bands
      .map((b) => b.carrier_hz)
      .sort((a, b) => a - b);
    const rows = data.carriers_hz
      .map((est) => {
        const nearest = trueCarriers.reduce(
          (best, t) => (Math.abs(t - est) < Math.abs(best - est) ? t : best),
          trueCarriers[0] ?? NaN,
        );
        const err = Number.isNaN(nearest) ? null : Math.abs(est - nearest);
        return `<tr><td>${(est / 1e6).toFixed(4)}</td><td>${
          Number.isNaN(nearest) ? "-" : (nearest / 1e6).toFixed(4)
        }</td><td>${err === null ? "-" : err.toFixed(1)}</td></tr>`;
      })
      .join("");
    const corr = data.band_correlations
      .map(
        (c) =>
          `<tr><td>${(c.carrier_hz / 1e6).toFixed(1)}</td><td>${c.correlation.toFixed(4)}</td></tr>`,
      )
      .join("");
    results = `
      <table class="result-table"><thead><tr><th>estimated MHz</th><th>nearest true MHz</th><th>error Hz</th></tr></thead>
      <tbody>${rows || '<tr><td colspan="3">no carriers (zero signal)</td></tr>'}</tbody></table>
      <table class="result-table"><thead><tr><th>band MHz</th><th>correlation vs truth</th></tr></thead>
      <tbody>${corr || '<tr><td colspan="2">-</td></tr>'}</tbody></table>
      <p>rms ${data.rms.toExponential(3)}, ${fmtHz(data.sample_rate_hz)} grid, ${(data.duration_s * 1e3).toFixed(3)} ms
      ${data.cached ? '<span class="badge">cached</span>' : ""}</p>
      ${traceSvg}
      <button data-action="tweak">tweak parameters and rerun (back to stage 2)</button>`;
  }
  $("reconstruct-body").innerHTML = `
    <div class="run-row">
      <button data-action="run-4" ${vm.canRun(4) ? "" : "disabled"}>4. reconstruct</button>
      <span class="gate-reason">${vm.gateReason(4) ?? ""}</span>
      <span class="stage-status status-${vm.reconstruct.status}">${vm.reconstruct.status}</span>
    </div>
    <div id="reconstruct-results">${results}</div>`;
}

function renderErrorPanel(): void {
  const stages = [vm.create, vm.sample, vm.recover, vm.reconstruct];
  const failed = stages.findIndex((s) => s.status === "error");
  const panel = $("error-panel");
  if (failed < 0) {
    panel.innerHTML = "";
    panel.classList.add("hidden");
    return;
  }
  const err = stages[failed].error!;
  panel.classList.remove("hidden");
  panel.innerHTML = `
    <b>stage ${failed + 1} failed:</b> <code>${err.code}</code> ${err.message}
    <pre>${JSON.stringify(err.details, null, 2) ?? ""}</pre>
    <button data-action="retry">retry</button>`;
}

function render(): void {
  renderScenario();
  renderConfig();
  renderRecover();
  renderReconstruct();
  renderErrorPanel();
  ($("api-base") as HTMLInputElement).value = client.baseUrl;
}

// ---------------------------------------------------------------------------
// event wiring

function onClick(event: Event): void {
  const el = (event.target as HTMLElement).closest("[data-action]");
  if (!el) return;
  const action = (el as HTMLElement).dataset.action!;
  if (action === "preset-demo") vm.setScenario(DEMO_SCENARIO);
  else if (action === "preset-empty") vm.setScenario(EMPTY_SCENARIO);
  else if (action === "preset-prototype") vm.setConfig(PROTOTYPE_CONFIG);
  else if (action === "preset-basic") vm.setConfig(BASIC_CONFIG);
  else if (action === "add-band") {
    const doc = cloneScenario(vm.scenario);
    doc.bands.push({
      carrier_hz: 500e6,
      bandwidth_hz: 0,
      amplitude: 1,
      modulation: "pure_sine",
      mod_params: {},
    });
    vm.setScenario(doc);
  } else if (action === "remove-band") {
    const doc = cloneScenario(vm.scenario);
    doc.bands.splice(Number((el as HTMLElement).dataset.band), 1);
    vm.setScenario(doc);
  } else if (action === "tweak") {
    vm.tweakAndRerun();
  } else if (action === "retry" && lastAttempt) {
    void attempt(lastAttempt);
    return;
  } else if (action.startsWith("run-")) {
    void attempt(Number(action.slice(4)) as StageNumber);
    return;
  } else if (action === "export") {
    const blob = new Blob([vm.exportJson()], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "mwcsense-session.json";
    a.click();
    URL.revokeObjectURL(a.href);
    return;
  } else if (action === "import") {
    ($("import-file") as HTMLInputElement).click();
    return;
  } else {
    return;
  }
  render();
}

function onChange(event: Event): void {
  const el = event.target as HTMLInputElement | HTMLSelectElement;
  if (el.id === "api-base") {
    client = new SensingClient(el.value);
    localStorage.setItem("mwcsense-api", client.baseUrl);
    return;
  }
  if (el.id === "import-file") {
    const file = (el as HTMLInputElement).files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      try {
        vm.importJson(text);
      } catch (err) {
        alert(`import failed: ${(err as Error).message}`);
      }
      render();
    });
    return;
  }
  if (el.dataset.band !== undefined) {
    updateBand(Number(el.dataset.band), el.dataset.key!, el);
    render();
    return;
  }
  if (el.id.startsWith("sc-")) {
    readScenarioForm();
    render();
    return;
  }
  if (el.id.startsWith("cf-") || el.id === "rc-sparsity") {
    if (el.id === "rc-sparsity") {
      vm.setSparsity(el.value === "" ? null : Math.round(Number(el.value)));
    } else {
      readConfigForm();
    }
    render();
  }
}

document.addEventListener("click", onClick);
document.addEventListener("change", onChange);
render();
