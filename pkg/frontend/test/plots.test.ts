import { describe, expect, it } from "vitest";

import {
  bandDiagram,
  decimate,
  holeRows,
  linePlot,
  supportOverlayRows,
  traceFromFloat64,
} from "../src/plots.js";

describe("linePlot", () => {
  it("renders a well-formed SVG with title, axes and a polyline", () => {
    const x = Array.from({ length: 100 }, (_, i) => i * 1e6);
    const y = x.map((v) => Math.sin(v / 3e6));
    const svg = linePlot([{ x, y, label: "demo" }], {
      title: "spectrum",
      xLabel: "frequency (MHz)",
      yLabel: "dB",
      xScale: 1e6,
    });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
    expect(svg).toContain("spectrum");
    expect(svg).toContain("polyline");
    expect(svg).toContain("frequency (MHz)");
    expect(svg).toContain("demo");
  });

  it("escapes markup in labels", () => {
    const svg = linePlot([{ x: [0, 1], y: [0, 1] }], { title: "<b>&" });
    expect(svg).toContain("&lt;b&gt;&amp;");
    expect(svg).not.toContain("<b>&");
  });

  it("degrades gracefully with no data", () => {
    const svg = linePlot([]);
    expect(svg).toContain("no data");
  });
});

describe("decimate", () => {
  it("keeps extremes so narrow peaks survive", () => {
    const n = 10_000;
    const x = Array.from({ length: n }, (_, i) => i);
    const y = new Array<number>(n).fill(0);
    y[5_000] = 42; // single-sample spike
    const out = decimate(x, y, 500);
    expect(out.length).toBeLessThanOrEqual(500);
    expect(Math.max(...out.map(([, v]) => v))).toBe(42);
    // x stays sorted after min/max pairing
    const xs = out.map(([v]) => v);
    expect([...xs].sort((a, b) => a - b)).toEqual(xs);
  });

  it("passes short series through untouched", () => {
    expect(decimate([1, 2, 3], [4, 5, 6], 500)).toEqual([
      [1, 4],
      [2, 5],
      [3, 6],
    ]);
  });
});

describe("supportOverlayRows", () => {
  it("classifies slices as ok / missed / spurious", () => {
    const rows = supportOverlayRows([3, 5], [3, 4], 20e6, 1e9);
    const detected = rows.find((r) => r.label === "detected")!;
    const kinds = new Map(detected.segments.map((s) => [s.title, s.kind]));
    expect(kinds.get("slice 3: detected")).toBe("ok");
    expect(kinds.get("slice 4: missed")).toBe("missed");
    expect(kinds.get("slice 5: spurious")).toBe("spurious");
    const truth = rows.find((r) => r.label === "true")!;
    expect(truth.segments.map((s) => s.kind)).toEqual(["truth", "truth"]);
  });

  it("ignores negative slice indices (the positive half-band is shown)", () => {
    const rows = supportOverlayRows([-3, 3], [-3, 3], 20e6, 1e9);
    const detected = rows.find((r) => r.label === "detected")!;
    expect(detected.segments).toHaveLength(1);
    expect(detected.segments[0].kind).toBe("ok");
  });

  it("maps slice l to [l*f_p - f_p/2, l*f_p + f_p/2] clipped at zero", () => {
    const rows = supportOverlayRows([0], [0], 20e6, 1e9);
    const seg = rows.find((r) => r.label === "detected")!.segments[0];
    expect(seg.lo).toBe(0);
    expect(seg.hi).toBe(10e6);
  });
});

describe("holeRows", () => {
  it("covers the band with alternating occupied and hole segments", () => {
    const rows = holeRows(
      [
        [0, 100e6],
        [300e6, 1e9],
      ],
      1e9,
    );
    expect(rows).toHaveLength(1);
    const segs = rows[0].segments;
    const holes = segs.filter((s) => s.kind === "hole");
    const occupied = segs.filter((s) => s.kind === "occupied");
    expect(holes).toHaveLength(2);
    expect(occupied).toHaveLength(1);
    expect(occupied[0].lo).toBe(100e6);
    expect(occupied[0].hi).toBe(300e6);
    const total = segs.reduce((acc, s) => acc + (s.hi - s.lo), 0);
    expect(total).toBeCloseTo(1e9, 3);
  });

  it("an empty hole list means the whole band is occupied", () => {
    const segs = holeRows([], 1e9)[0].segments;
    expect(segs).toEqual([{ lo: 0, hi: 1e9, kind: "occupied" }]);
  });
});

describe("bandDiagram", () => {
  it("emits one rect per segment with a kind class", () => {
    const svg = bandDiagram(
      [{ label: "demo", segments: [{ lo: 0, hi: 5e8, kind: "hole" }] }],
      0,
      1e9,
    );
    expect(svg).toContain('class="seg seg-hole"');
    expect(svg).toContain("frequency (MHz)");
  });
});

describe("traceFromFloat64", () => {
  it("decodes little-endian float64 and builds the time axis", () => {
    const values = [0.5, -1.25, 3.0];
    const buf = new ArrayBuffer(values.length * 8);
    const view = new DataView(buf);
    values.forEach((v, i) => view.setFloat64(i * 8, v, true));
    const series = traceFromFloat64(buf, 2e9);
    expect(series.y).toEqual(values);
    expect(series.x[0]).toBe(0);
    expect(series.x[1]).toBeCloseTo(0.5e-9, 15);
  });

  it("caps the number of samples", () => {
    const buf = new ArrayBuffer(8 * 100);
    const series = traceFromFloat64(buf, 1e6, 10);
    expect(series.y).toHaveLength(10);
  });
});
