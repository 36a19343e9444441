import { cpSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  heatmapCorners,
  poolHist,
  renderBoundComparison,
  renderDensityPanels,
  renderHeatmap,
} from "../src/render.js";
import {
  SchemaError,
  checkInputs,
  readBounds,
  readHeatmap,
  readHist,
} from "../src/schema.js";

// golden seeded outputs emitted by the simulator CLI (see repository root)
const GOLDEN = fileURLToPath(new URL("../../golden", import.meta.url));
const K2 = join(GOLDEN, "k2");
const K5 = join(GOLDEN, "k5");

describe("schema readers", () => {
  it("parses every golden file", () => {
    expect(readHist(join(K2, "hist.csv")).length).toBeGreaterThan(0);
    expect(readBounds(join(GOLDEN, "bounds_k2", "bounds.csv")).length).toBeGreaterThan(0);
    expect(readHeatmap(join(GOLDEN, "heatmap", "heatmap.csv")).length).toBe(6);
  });

  it("rejects a file with a missing column", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    writeFileSync(join(dir, "hist.csv"), "trial,t,count\n0,0,5\n");
    expect(() => readHist(join(dir, "hist.csv"))).toThrowError(
      /missing column "bin_left"/,
    );
  });

  it("verifies manifest digests and aborts on tampering", () => {
    expect(() => checkInputs([K2, K5])).not.toThrow();
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    cpSync(K2, dir, { recursive: true });
    writeFileSync(join(dir, "hist.csv"), "trial,t,bin_left,count\n0,0,0,1\n");
    expect(() => checkInputs([dir])).toThrowError(SchemaError);
  });
});

describe("density panels", () => {
  it("renders one panel per run without error", () => {
    const panels = renderDensityPanels({ inputDirs: [K2, K5] });
    expect(panels).toHaveLength(2);
    for (const svg of panels) {
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg).toContain("generation");
    }
  });

  it("k=2 run concentrates into a central column", () => {
    const pooled = poolHist(readHist(join(K2, "hist.csv")));
    const last = pooled.get(Math.max(...pooled.keys()))!;
    const total = [...last.values()].reduce((a, b) => a + b, 0);
    let central = 0;
    for (const [left, count] of last) {
      if (left >= 0.45 && left < 0.55) central += count;
    }
    expect(central / total).toBeGreaterThan(0.99);
  });

  it("k=5 run shows two bands near 1/4 and 3/4", () => {
    const pooled = poolHist(readHist(join(K5, "hist.csv")));
    const last = pooled.get(Math.max(...pooled.keys()))!;
    const mass = (lo: number, hi: number) => {
      let m = 0;
      for (const [left, count] of last) if (left >= lo && left < hi) m += count;
      return m;
    };
    const total = mass(0, 1.01);
    expect(mass(0.17, 0.33) / total).toBeGreaterThan(0.3);
    expect(mass(0.67, 0.83) / total).toBeGreaterThan(0.3);
    expect(mass(0.4, 0.6) / total).toBeLessThan(0.05);
  });

  it("rejects a single-generation input", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    cpSync(K2, dir, { recursive: true });
    const rows = readFileSync(join(dir, "hist.csv"), "utf8")
      .split("\n")
      .filter((l, i) => i === 0 || l.startsWith("0,0,"));
    writeFileSync(join(dir, "hist.csv"), rows.join("\n") + "\n");
    expect(() => renderDensityPanels({ inputDirs: [dir] })).toThrowError(
      /at least 2 generations|digest mismatch/,
    );
  });
});

describe("bound comparison", () => {
  it("k=2 simulated curve overlaps the exact curve", () => {
    const rows = readBounds(join(GOLDEN, "bounds_k2", "bounds.csv"));
    for (const r of rows) {
      expect(Math.abs(r.empirical_ecdf_mean - r.bound_value)).toBeLessThan(0.02);
      expect(r.satisfied).toBe(true);
    }
    const svg = renderBoundComparison({ inputDirs: [join(GOLDEN, "bounds_k2")] });
    expect(svg).toContain("stroke-dasharray");
  });

  it("k=3 simulated curve stays below the bound curve", () => {
    const rows = readBounds(join(GOLDEN, "bounds_k3", "bounds.csv"));
    expect(rows.length).toBeGreaterThan(0);
    for (const r of rows) {
      expect(r.satisfied).toBe(true);
    }
    // strict dominance holds once the bound has detached from the start value
    const late = rows.filter((r) => r.t >= 3);
    expect(late.every((r) => r.empirical_ecdf_mean < r.bound_value)).toBe(true);
    renderBoundComparison({ inputDirs: [join(GOLDEN, "bounds_k3")] });
  });
});

describe("heatmap", () => {
  it("renders and its corner cells read as expected", () => {
    const rows = readHeatmap(join(GOLDEN, "heatmap", "heatmap.csv"));
    const corners = heatmapCorners(rows);
    expect(Math.abs(corners.allK3 - 0.5)).toBeLessThanOrEqual(0.01);
    expect(corners.allK5).toBeLessThan(0.4);
    const svg = renderHeatmap({ inputDirs: [join(GOLDEN, "heatmap")] });
    expect((svg.match(/<rect/g) ?? []).length).toBeGreaterThanOrEqual(6);
  });
});

describe("determinism", () => {
  it("identical inputs produce byte-identical SVG", () => {
    const a = renderDensityPanels({ inputDirs: [K2] });
    const b = renderDensityPanels({ inputDirs: [K2] });
    expect(a).toEqual(b);
    expect(renderHeatmap({ inputDirs: [join(GOLDEN, "heatmap")] })).toEqual(
      renderHeatmap({ inputDirs: [join(GOLDEN, "heatmap")] }),
    );
  });
});
