/**
 * Render figures from simulator output directories.
 *
 * Usage:
 *   figures density --in out/k2 out/k5 --out figs/
 *   figures bounds  --in out/bounds_k2 --out figs/
 *   figures heatmap --in out/heatmap --out figs/
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { basename, join } from "node:path";
import {
  renderBoundComparison,
  renderDensityPanels,
  renderHeatmap,
} from "./render.js";
import { SchemaError } from "./schema.js";

function parseArgs(argv: string[]): { kind: string; inputs: string[]; out: string } {
  const kind = argv[0];
  const inputs: string[] = [];
  let out = "figs";
  for (let i = 1; i < argv.length; i++) {
    if (argv[i] === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) inputs.push(argv[++i]);
    } else if (argv[i] === "--out") {
      out = argv[++i];
    } else {
      throw new SchemaError(`unknown argument ${argv[i]}`);
    }
  }
  if (!["density", "bounds", "heatmap"].includes(kind) || inputs.length === 0) {
    throw new SchemaError(
      "usage: figures <density|bounds|heatmap> --in DIR [DIR ...] [--out DIR]",
    );
  }
  return { kind, inputs, out };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    mkdirSync(args.out, { recursive: true });
    if (args.kind === "density") {
      const panels = renderDensityPanels({ inputDirs: args.inputs });
      panels.forEach((svg, i) => {
        const name = `density_${basename(args.inputs[i])}.svg`;
        writeFileSync(join(args.out, name), svg);
        console.log(`wrote ${join(args.out, name)}`);
      });
    } else if (args.kind === "bounds") {
      const svg = renderBoundComparison({ inputDirs: args.inputs });
      writeFileSync(join(args.out, "bounds.svg"), svg);
      console.log(`wrote ${join(args.out, "bounds.svg")}`);
    } else {
      const svg = renderHeatmap({ inputDirs: args.inputs });
      writeFileSync(join(args.out, "heatmap.svg"), svg);
      console.log(`wrote ${join(args.out, "heatmap.svg")}`);
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
