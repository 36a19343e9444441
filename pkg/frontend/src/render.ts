/**
 * Figure renderers over the simulator's emitted files.
 *
 * Three figure styles: density-over-time panels (position vs generation,
 * log-scaled greys, counts pooled across trials), bound-vs-simulation line
 * plots (one pair of curves per probe x), and the mixture heatmap (mode
 * position over the k = 3/4/5 simplex). Rendering is read-only and
 * deterministic: identical inputs produce byte-identical SVG.
 */

import { join } from "node:path";
import { scaleLinear, scaleLog } from "d3-scale";
import { line } from "d3-shape";
import {
  BoundsRow,
  HeatmapRow,
  HistRow,
  SchemaError,
  checkInputs,
  readBounds,
  readHeatmap,
  readHist,
} from "./schema.js";

export interface FigureSpec {
  /** run output directories (density panels: one panel per directory) */
  inputDirs: string[];
  width?: number;
  height?: number;
}

const MARGIN = { top: 24, right: 16, bottom: 36, left: 48 };

function grey(intensity: number): string {
  // intensity 0 = white (empty), 1 = black (densest)
  const v = Math.round(255 * (1 - Math.min(Math.max(intensity, 0), 1)));
  return `rgb(${v},${v},${v})`;
}

function frame(
  width: number,
  height: number,
  title: string,
  xLabel: string,
  yLabel: string,
): string[] {
  return [
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${width - MARGIN.left - MARGIN.right}" height="${height - MARGIN.top - MARGIN.bottom}" fill="none" stroke="black"/>`,
    `<text x="${width / 2}" y="16" text-anchor="middle" font-size="13">${title}</text>`,
    `<text x="${width / 2}" y="${height - 8}" text-anchor="middle" font-size="11">${xLabel}</text>`,
    `<text x="14" y="${height / 2}" text-anchor="middle" font-size="11" transform="rotate(-90 14 ${height / 2})">${yLabel}</text>`,
  ];
}

/** Pool histogram counts across trials: (t, bin_left) -> summed count. */
export function poolHist(rows: HistRow[]): Map<number, Map<number, number>> {
  const byT = new Map<number, Map<number, number>>();
  for (const r of rows) {
    let bins = byT.get(r.t);
    if (!bins) byT.set(r.t, (bins = new Map()));
    bins.set(r.bin_left, (bins.get(r.bin_left) ?? 0) + r.count);
  }
  return byT;
}

/**
 * One density panel per input directory: x-axis position, y-axis
 * generation, cell darkness log-scaled in pooled count. Returns one SVG
 * string per directory, in order.
 */
export function renderDensityPanels(spec: FigureSpec): string[] {
  const width = spec.width ?? 480;
  const height = spec.height ?? 360;
  checkInputs(spec.inputDirs);
  return spec.inputDirs.map((dir) => {
    const pooled = poolHist(readHist(join(dir, "hist.csv")));
    const gens = [...pooled.keys()].sort((a, b) => a - b);
    if (gens.length < 2) {
      throw new SchemaError(`${dir}: need at least 2 generations, got ${gens.length}`);
    }
    const binLefts = [...pooled.get(gens[0])!.keys()].sort((a, b) => a - b);
    const binWidth = binLefts.length > 1 ? binLefts[1] - binLefts[0] : 1;
    const maxCount = Math.max(
      ...[...pooled.values()].flatMap((bins) => [...bins.values()]),
    );
    // log scale makes low-density regions visible; counts of 0 stay white
    const shade = scaleLog().domain([1, Math.max(maxCount, 2)]).range([0.08, 1]);
    const x = scaleLinear()
      .domain([0, 1])
      .range([MARGIN.left, width - MARGIN.right]);
    const y = scaleLinear()
      .domain([gens[0], gens[gens.length - 1] + 1])
      .range([MARGIN.top, height - MARGIN.bottom]);
    const cells: string[] = [];
    for (const t of gens) {
      for (const [left, count] of pooled.get(t)!) {
        if (count <= 0) continue;
        cells.push(
          `<rect x="${x(left).toFixed(4)}" y="${y(t).toFixed(4)}" ` +
            `width="${(x(left + binWidth) - x(left)).toFixed(4)}" ` +
            `height="${(y(t + 1) - y(t)).toFixed(4)}" fill="${grey(shade(count))}"/>`,
        );
      }
    }
    return svgDoc(width, height, [
      ...cells,
      ...frame(width, height, `winner density, ${dir}`, "position", "generation"),
    ]);
  });
}

/**
 * Empirical mean ecdf vs its formula/bound per probe x, over generations.
 * Solid line: simulation; dashed line: bound.
 */
export function renderBoundComparison(spec: FigureSpec): string {
  const width = spec.width ?? 480;
  const height = spec.height ?? 360;
  if (spec.inputDirs.length !== 1) {
    throw new SchemaError("bound comparison takes exactly one bounds directory");
  }
  const rows = readBounds(join(spec.inputDirs[0], "bounds.csv"));
  if (rows.length === 0) throw new SchemaError("bounds.csv has no data rows");
  const xs = [...new Set(rows.map((r) => r.x))].sort((a, b) => a - b);
  const tMax = Math.max(...rows.map((r) => r.t));
  const vMax = Math.max(
    ...rows.map((r) => Math.max(r.empirical_ecdf_mean, r.bound_value)),
  );
  const x = scaleLinear().domain([0, tMax]).range([MARGIN.left, width - MARGIN.right]);
  const y = scaleLinear().domain([0, vMax]).range([height - MARGIN.bottom, MARGIN.top]);
  const path = line<{ t: number; v: number }>()
    .x((d) => Number(x(d.t).toFixed(4)))
    .y((d) => Number(y(d.v).toFixed(4)));
  const curves: string[] = [];
  xs.forEach((probe, i) => {
    const series = rows
      .filter((r) => r.x === probe)
      .sort((a, b) => a.t - b.t);
    const hue = Math.round((i * 360) / xs.length);
    const emp = path(series.map((r) => ({ t: r.t, v: r.empirical_ecdf_mean })));
    const bnd = path(series.map((r) => ({ t: r.t, v: r.bound_value })));
    curves.push(
      `<path d="${emp}" fill="none" stroke="hsl(${hue},70%,40%)" stroke-width="1.5"/>`,
      `<path d="${bnd}" fill="none" stroke="hsl(${hue},70%,40%)" stroke-width="1.5" stroke-dasharray="5,3"/>`,
    );
  });
  return svgDoc(width, height, [
    ...curves,
    ...frame(width, height, "simulation (solid) vs bound (dashed)", "generation", "cdf at probe x"),
  ]);
}

/** Mode-position heatmap over the (fraction_k3, fraction_k4) simplex grid. */
export function renderHeatmap(spec: FigureSpec): string {
  const width = spec.width ?? 420;
  const height = spec.height ?? 400;
  if (spec.inputDirs.length !== 1) {
    throw new SchemaError("heatmap takes exactly one heatmap directory");
  }
  const rows = readHeatmap(join(spec.inputDirs[0], "heatmap.csv"));
  if (rows.length === 0) throw new SchemaError("heatmap.csv has no data rows");
  const levels3 = [...new Set(rows.map((r) => r.fraction_k3))].sort((a, b) => a - b);
  const levels4 = [...new Set(rows.map((r) => r.fraction_k4))].sort((a, b) => a - b);
  const x = scaleLinear().domain([0, levels3.length]).range([MARGIN.left, width - MARGIN.right]);
  const y = scaleLinear().domain([0, levels4.length]).range([height - MARGIN.bottom, MARGIN.top]);
  // mode is folded into [0, 1/2]; 1/2 (central convergence) renders darkest
  const shade = scaleLinear().domain([0, 0.5]).range([0.05, 1]);
  const cells = rows.map((r) => {
    const i = levels3.indexOf(r.fraction_k3);
    const j = levels4.indexOf(r.fraction_k4);
    return (
      `<rect x="${x(i).toFixed(4)}" y="${y(j + 1).toFixed(4)}" ` +
      `width="${(x(i + 1) - x(i)).toFixed(4)}" height="${(y(j) - y(j + 1)).toFixed(4)}" ` +
      `fill="${grey(shade(r.mode))}"><title>mode ${r.mode}</title></rect>`
    );
  });
  return svgDoc(width, height, [
    ...cells,
    ...frame(width, height, "winner-distribution mode", "fraction k=3", "fraction k=4"),
  ]);
}

/** Corner readings of a heatmap table (pure-k3 and pure-k5 mixtures). */
export function heatmapCorners(rows: HeatmapRow[]): { allK3: number; allK5: number } {
  const find = (pred: (r: HeatmapRow) => boolean, name: string): number => {
    const hit = rows.find(pred);
    if (!hit) throw new SchemaError(`heatmap has no ${name} corner cell`);
    return hit.mode;
  };
  return {
    allK3: find((r) => r.fraction_k3 === 1, "all-k3"),
    allK5: find((r) => r.fraction_k5 === 1, "all-k5"),
  };
}

function svgDoc(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    ...body,
    "</svg>",
  ].join("\n");
}
