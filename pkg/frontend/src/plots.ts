/** SVG figures built from server-supplied arrays.
 *
 * Everything here is a plotting transform: scaling, decimation for
 * drawing, and slice-index-to-interval bookkeeping. No signal math.
 */

export interface Series {
  x: number[];
  y: number[];
  label?: string;
  cssClass?: string;
}

export interface PlotOptions {
  width?: number;
  height?: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xScale?: number; // divide x values for display, e.g. 1e6 for MHz
}

export interface BandSegment {
  lo: number;
  hi: number;
  kind: string; // maps to CSS class seg-<kind>
  title?: string;
}

const SEG_COLORS: Record<string, string> = {
  ok: "#3fa34d",
  missed: "#d62828",
  spurious: "#d62828",
  hole: "#9ecbff",
  occupied: "#5a5a5a",
  truth: "#888888",
};

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((k) => k * mag).find((s) => s >= rawStep) ?? rawStep;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function linePlot(series: Series[], opts: PlotOptions = {}): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 220;
  const pad = { left: 52, right: 12, top: opts.title ? 24 : 10, bottom: 34 };
  const xs = series.flatMap((s) => s.x);
  const ys = series.flatMap((s) => s.y);
  if (xs.length === 0) {
    return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="plot empty"><text x="${width / 2}" y="${height / 2}" text-anchor="middle">no data</text></svg>`;
  }
  const xScale = opts.xScale ?? 1;
  const xLo = Math.min(...xs) / xScale;
  const xHi = Math.max(...xs) / xScale;
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const ySpan = yHi - yLo || 1;
  const xSpan = xHi - xLo || 1;
  const plotW = width - pad.left - pad.right;
  const plotH = height - pad.top - pad.bottom;
  const px = (x: number) => pad.left + ((x / xScale - xLo) / xSpan) * plotW;
  const py = (y: number) => pad.top + (1 - (y - yLo) / ySpan) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="plot">`,
  );
  if (opts.title) {
    parts.push(
      `<text x="${width / 2}" y="15" text-anchor="middle" class="plot-title">${esc(opts.title)}</text>`,
    );
  }
  parts.push(
    `<rect x="${pad.left}" y="${pad.top}" width="${plotW}" height="${plotH}" class="plot-frame" fill="none" stroke="#444"/>`,
  );
  for (const t of ticks(xLo, xHi, 6)) {
    const x = px(t * xScale);
    parts.push(
      `<line x1="${x}" y1="${pad.top + plotH}" x2="${x}" y2="${pad.top + plotH + 4}" stroke="#444"/>`,
      `<text x="${x}" y="${pad.top + plotH + 16}" text-anchor="middle" class="tick">${t}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi, 4)) {
    const y = py(t);
    parts.push(
      `<line x1="${pad.left - 4}" y1="${y}" x2="${pad.left}" y2="${y}" stroke="#444"/>`,
      `<text x="${pad.left - 7}" y="${y + 3}" text-anchor="end" class="tick">${t}</text>`,
    );
  }
  if (opts.xLabel) {
    parts.push(
      `<text x="${pad.left + plotW / 2}" y="${height - 6}" text-anchor="middle" class="axis-label">${esc(opts.xLabel)}</text>`,
    );
  }
  if (opts.yLabel) {
    parts.push(
      `<text x="12" y="${pad.top + plotH / 2}" text-anchor="middle" class="axis-label" transform="rotate(-90 12 ${pad.top + plotH / 2})">${esc(opts.yLabel)}</text>`,
    );
  }
  const palette = ["#4ea1d3", "#e8a33d", "#3fa34d", "#b86bd6"];
  series.forEach((s, i) => {
    const pts = decimate(s.x, s.y, 2000)
      .map(([x, y]) => `${px(x).toFixed(1)},${py(y).toFixed(1)}`)
      .join(" ");
    const cls = s.cssClass ?? `series-${i}`;
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${palette[i % palette.length]}" stroke-width="1.2" class="plot-line ${cls}"/>`,
    );
    if (s.label) {
      parts.push(
        `<text x="${pad.left + plotW - 6}" y="${pad.top + 14 + 14 * i}" text-anchor="end" fill="${palette[i % palette.length]}" class="legend">${esc(s.label)}</text>`,
      );
    }
  });
  parts.push("</svg>");
  return parts.join("");
}

/** Keeps extremes within buckets so narrow peaks survive decimation. */
export function decimate(x: number[], y: number[], maxPoints: number): [number, number][] {
  const n = Math.min(x.length, y.length);
  if (n <= maxPoints) {
    return Array.from({ length: n }, (_, i) => [x[i], y[i]]);
  }
  const buckets = Math.floor(maxPoints / 2);
  const out: [number, number][] = [];
  for (let b = 0; b < buckets; b++) {
    const a = Math.floor((b * n) / buckets);
    const z = Math.max(Math.floor(((b + 1) * n) / buckets), a + 1);
    let iMin = a;
    let iMax = a;
    for (let i = a; i < z; i++) {
      if (y[i] < y[iMin]) iMin = i;
      if (y[i] > y[iMax]) iMax = i;
    }
    const first = Math.min(iMin, iMax);
    const second = Math.max(iMin, iMax);
    out.push([x[first], y[first]]);
    if (second !== first) out.push([x[second], y[second]]);
  }
  return out;
}

export interface BandRow {
  label: string;
  segments: BandSegment[];
}

export function bandDiagram(
  rows: BandRow[],
  fLo: number,
  fHi: number,
  opts: PlotOptions = {},
): string {
  const width = opts.width ?? 640;
  const rowH = 26;
  const pad = { left: 90, right: 12, top: opts.title ? 26 : 8, bottom: 30 };
  const height = pad.top + rows.length * rowH + pad.bottom;
  const plotW = width - pad.left - pad.right;
  const span = fHi - fLo || 1;
  const px = (f: number) => pad.left + ((f - fLo) / span) * plotW;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="plot band-diagram">`,
  );
  if (opts.title) {
    parts.push(
      `<text x="${width / 2}" y="16" text-anchor="middle" class="plot-title">${esc(opts.title)}</text>`,
    );
  }
  rows.forEach((row, r) => {
    const y = pad.top + r * rowH;
    parts.push(
      `<text x="${pad.left - 8}" y="${y + rowH / 2 + 4}" text-anchor="end" class="row-label">${esc(row.label)}</text>`,
      `<rect x="${pad.left}" y="${y + 4}" width="${plotW}" height="${rowH - 8}" fill="#1c1c1c" stroke="#444"/>`,
    );
    for (const seg of row.segments) {
      const x0 = px(Math.max(seg.lo, fLo));
      const x1 = px(Math.min(seg.hi, fHi));
      if (!(x1 > x0)) continue;
      const color = SEG_COLORS[seg.kind] ?? "#777";
      const title = seg.title ? `<title>${esc(seg.title)}</title>` : "";
      parts.push(
        `<rect x="${x0.toFixed(1)}" y="${y + 4}" width="${(x1 - x0).toFixed(1)}" height="${rowH - 8}" fill="${color}" class="seg seg-${esc(seg.kind)}">${title}</rect>`,
      );
    }
  });
  const yAxis = pad.top + rows.length * rowH + 4;
  for (const t of ticks(fLo / 1e6, fHi / 1e6, 6)) {
    const x = px(t * 1e6);
    parts.push(
      `<line x1="${x}" y1="${yAxis}" x2="${x}" y2="${yAxis + 4}" stroke="#444"/>`,
      `<text x="${x}" y="${yAxis + 16}" text-anchor="middle" class="tick">${t}</text>`,
    );
  }
  parts.push(
    `<text x="${pad.left + plotW / 2}" y="${height - 4}" text-anchor="middle" class="axis-label">frequency (MHz)</text>`,
  );
  parts.push("</svg>");
  return parts.join("");
}

/** Slice intervals on the positive half-band, classified against truth. */
export function supportOverlayRows(
  detected: number[],
  trueSupport: number[],
  fP: number,
  fMax: number,
): BandRow[] {
  const det = new Set(detected.filter((l) => l >= 0));
  const tru = new Set(trueSupport.filter((l) => l >= 0));
  const all = [...new Set([...det, ...tru])].sort((a, b) => a - b);
  const detectedRow: BandSegment[] = [];
  const truthRow: BandSegment[] = [];
  for (const l of all) {
    const lo = Math.max(l * fP - fP / 2, 0);
    const hi = l * fP + fP / 2;
    const inDet = det.has(l);
    const inTru = tru.has(l);
    if (inTru) {
      truthRow.push({ lo, hi, kind: "truth", title: `slice ${l}` });
    }
    if (inDet && inTru) {
      detectedRow.push({ lo, hi, kind: "ok", title: `slice ${l}: detected` });
    } else if (inDet) {
      detectedRow.push({ lo, hi, kind: "spurious", title: `slice ${l}: spurious` });
    } else {
      detectedRow.push({ lo, hi, kind: "missed", title: `slice ${l}: missed` });
    }
  }
  return [
    { label: "true", segments: truthRow },
    { label: "detected", segments: detectedRow },
  ];
}

/** One row of holes over [0, fMax]; the rest counts as occupied. */
export function holeRows(holesPositive: [number, number][], fMax: number): BandRow[] {
  const holes: BandSegment[] = holesPositive.map(([lo, hi]) => ({
    lo,
    hi: Math.min(hi, fMax),
    kind: "hole",
    title: `hole ${(lo / 1e6).toFixed(1)}..${(Math.min(hi, fMax) / 1e6).toFixed(1)} MHz`,
  }));
  const occupied: BandSegment[] = [];
  let cursor = 0;
  for (const h of [...holesPositive].sort((a, b) => a[0] - b[0])) {
    if (h[0] > cursor) {
      occupied.push({ lo: cursor, hi: h[0], kind: "occupied" });
    }
    cursor = Math.max(cursor, h[1]);
  }
  if (cursor < fMax) {
    occupied.push({ lo: cursor, hi: fMax, kind: "occupied" });
  }
  return [{ label: "spectrum", segments: [...occupied, ...holes] }];
}

/** Little-endian float64 artifact decoded for a time-domain trace. */
export function traceFromFloat64(
  buf: ArrayBuffer,
  sampleRateHz: number,
  maxSamples = 4000,
): Series {
  const view = new DataView(buf);
  const n = Math.min(Math.floor(buf.byteLength / 8), maxSamples);
  const x: number[] = new Array(n);
  const y: number[] = new Array(n);
  for (let i = 0; i < n; i++) {
    x[i] = i / sampleRateHz;
    y[i] = view.getFloat64(i * 8, true);
  }
  return { x, y, label: "reconstruction" };
}
