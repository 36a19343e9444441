/**
 * Typed readers for the simulator's emitted files.
 *
 * The figure layer never recomputes statistics: it parses the CSV/JSON
 * files exactly as written (17-digit floats, stable headers) and validates
 * schemas up front so a missing column fails with a clear message instead
 * of NaN plots.
 */

import { createHash } from "node:crypto";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { csvParse } from "d3-dsv";

export interface EcdfRow {
  trial: number;
  t: number;
  grid_x: number;
  ecdf_value: number;
}

export interface HistRow {
  trial: number;
  t: number;
  bin_left: number;
  count: number;
}

export interface BoundsRow {
  t: number;
  x: number;
  empirical_ecdf_mean: number;
  bound_value: number;
  satisfied: boolean;
}

export interface HeatmapRow {
  fraction_k3: number;
  fraction_k4: number;
  fraction_k5: number;
  seed: number;
  mode: number;
}

export interface Manifest {
  tool_version: string;
  master_seed: number;
  files: Record<string, string>;
  config: Record<string, unknown>;
  notes?: string[];
}

export class SchemaError extends Error {}

function parseCsv<T>(
  path: string,
  columns: string[],
  convert: (row: Record<string, string>) => T,
): T[] {
  const rows = csvParse(readFileSync(path, "utf8"));
  for (const col of columns) {
    if (!rows.columns.includes(col)) {
      throw new SchemaError(
        `${path}: missing column "${col}" (found: ${rows.columns.join(", ")})`,
      );
    }
  }
  return rows.map((r) => convert(r as Record<string, string>));
}

function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (Number.isNaN(v)) {
    throw new SchemaError(`non-numeric value "${row[col]}" in column "${col}"`);
  }
  return v;
}

export function readEcdf(path: string): EcdfRow[] {
  return parseCsv(path, ["trial", "t", "grid_x", "ecdf_value"], (r) => ({
    trial: num(r, "trial"),
    t: num(r, "t"),
    grid_x: num(r, "grid_x"),
    ecdf_value: num(r, "ecdf_value"),
  }));
}

export function readHist(path: string): HistRow[] {
  return parseCsv(path, ["trial", "t", "bin_left", "count"], (r) => ({
    trial: num(r, "trial"),
    t: num(r, "t"),
    bin_left: num(r, "bin_left"),
    count: num(r, "count"),
  }));
}

export function readBounds(path: string): BoundsRow[] {
  return parseCsv(
    path,
    ["t", "x", "empirical_ecdf_mean", "bound_value", "satisfied"],
    (r) => ({
      t: num(r, "t"),
      x: num(r, "x"),
      empirical_ecdf_mean: num(r, "empirical_ecdf_mean"),
      bound_value: num(r, "bound_value"),
      satisfied: r["satisfied"] === "true",
    }),
  );
}

export function readHeatmap(path: string): HeatmapRow[] {
  return parseCsv(
    path,
    ["fraction_k3", "fraction_k4", "fraction_k5", "seed", "mode"],
    (r) => ({
      fraction_k3: num(r, "fraction_k3"),
      fraction_k4: num(r, "fraction_k4"),
      fraction_k5: num(r, "fraction_k5"),
      seed: num(r, "seed"),
      mode: num(r, "mode"),
    }),
  );
}

export function readManifest(dir: string): Manifest {
  const path = join(dir, "manifest.json");
  let raw: string;
  try {
    raw = readFileSync(path, "utf8");
  } catch {
    throw new SchemaError(`${dir}: no manifest.json; refusing to render`);
  }
  const m = JSON.parse(raw) as Manifest;
  if (typeof m.tool_version !== "string" || typeof m.files !== "object") {
    throw new SchemaError(`${path}: not a run manifest`);
  }
  return m;
}

function sha256(path: string): string {
  return createHash("sha256").update(readFileSync(path)).digest("hex");
}

/**
 * Verify that every data file consumed from `dir` is listed in its manifest
 * with a matching digest, and that all inputs come from the same tool
 * version. Mixing files from different runs (or edited files) aborts the
 * render instead of producing a silently inconsistent figure.
 */
export function checkInputs(dirs: string[]): Manifest[] {
  const manifests = dirs.map(readManifest);
  const versions = new Set(manifests.map((m) => m.tool_version));
  if (versions.size > 1) {
    throw new SchemaError(
      `inputs span tool versions ${[...versions].join(", ")}; refusing to mix`,
    );
  }
  dirs.forEach((dir, i) => {
    for (const [name, digest] of Object.entries(manifests[i].files)) {
      if (sha256(join(dir, name)) !== digest) {
        throw new SchemaError(`${join(dir, name)}: digest mismatch with manifest`);
      }
    }
  });
  return manifests;
}
