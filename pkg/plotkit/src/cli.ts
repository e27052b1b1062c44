#!/usr/bin/env node
/**
 * plotkit --aggregate PATH --fig {3,4,5,6,7} [--m VALUE] [--quantile Q]
 *         --out PATH [--points] [--allow-missing-manifest]
 *
 * Reads a sweep aggregate.csv (plus its manifest.json sidecar for
 * provenance) and writes one SVG figure. Exits nonzero on any input error.
 */

import { writeFileSync } from "node:fs";

import { buildFigure } from "./figures.js";

interface CliArgs {
  aggregate: string;
  fig: number;
  out: string;
  m?: number;
  quantile?: number;
  points: boolean;
  allowMissingManifest: boolean;
}

export function parseArgs(argv: string[]): CliArgs {
  const args: Partial<CliArgs> = { points: false, allowMissingManifest: false };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      const value = argv[++i];
      if (value === undefined) throw new Error(`${flag} needs a value`);
      return value;
    };
    switch (flag) {
      case "--aggregate":
        args.aggregate = next();
        break;
      case "--fig":
        args.fig = Number(next());
        break;
      case "--out":
        args.out = next();
        break;
      case "--m":
        args.m = Number(next());
        break;
      case "--quantile":
        args.quantile = Number(next());
        break;
      case "--points":
        args.points = true;
        break;
      case "--allow-missing-manifest":
        args.allowMissingManifest = true;
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!args.aggregate || !args.out || args.fig === undefined) {
    throw new Error("usage: plotkit --aggregate PATH --fig {3,4,5,6,7} --out PATH [--m VALUE] [--quantile Q]");
  }
  if (!Number.isInteger(args.fig) || args.fig < 3 || args.fig > 7) {
    throw new Error(`--fig must be one of 3,4,5,6,7, got ${args.fig}`);
  }
  if (args.m !== undefined && Number.isNaN(args.m)) {
    throw new Error("--m must be a number");
  }
  if (args.quantile !== undefined && Number.isNaN(args.quantile)) {
    throw new Error("--quantile must be a number");
  }
  return args as CliArgs;
}

export function run(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`plotkit: ${(err as Error).message}`);
    return 1;
  }
  try {
    const svg = buildFigure({
      aggregatePath: args.aggregate,
      fig: args.fig,
      m: args.m,
      quantile: args.quantile,
      showPoints: args.points,
      allowMissingManifest: args.allowMissingManifest,
    });
    writeFileSync(args.out, svg);
    console.error(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    console.error(`plotkit: ${(err as Error).message}`);
    return 2;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(run(process.argv.slice(2)));
}
