/**
 * The figure catalog. Figure ids mirror the simulator's documentation:
 *   3  constant-fee frontier (loss vs rms deviation)
 *   4  tapered-fee trend lines per initial fee, slope -1, deviation x-axis
 *   5  same as 4 for a custom slope (default -0.8)
 *   6  trend lines with rms slippage on the x-axis (default median probe)
 *   7  same as 6 for larger probes and a shallower slope (q=0.95, m=-0.8)
 */

import { existsSync, readFileSync } from "node:fs";
import { dirname, join } from "node:path";

import {
  AggregateRow,
  DEVIATION_COLUMN,
  LOSS_COLUMN,
  constantRows,
  leastSquares,
  readAggregateCsv,
  requireColumn,
  slippageColumn,
  slopeGroups,
} from "./data.js";
import { Chart, Point, Segment, renderChart } from "./svg.js";

export interface FigureOptions {
  aggregatePath: string;
  fig: number;
  m?: number;
  quantile?: number;
  showPoints?: boolean;
  allowMissingManifest?: boolean;
  warn?: (message: string) => void;
}

interface Provenance {
  config_sha256: string;
  master_seed: string | number;
}

function readProvenance(aggregatePath: string, allowMissing: boolean): Provenance {
  const manifestPath = join(dirname(aggregatePath), "manifest.json");
  if (!existsSync(manifestPath)) {
    if (!allowMissing) {
      throw new Error(
        `${manifestPath} not found; figures must embed the run's config hash ` +
          `and master seed (pass --allow-missing-manifest to override)`,
      );
    }
    return { config_sha256: "unknown", master_seed: "unknown" };
  }
  const manifest = JSON.parse(readFileSync(manifestPath, "utf8"));
  if (typeof manifest.config_sha256 !== "string" || manifest.master_seed === undefined) {
    throw new Error(`${manifestPath}: missing config_sha256 or master_seed`);
  }
  return { config_sha256: manifest.config_sha256, master_seed: manifest.master_seed };
}

function frontierChart(
  rows: AggregateRow[],
  xColumn: string,
  xLabel: string,
  title: string,
  m: number | null,
  provenance: Provenance,
  showPoints: boolean,
  warn: (message: string) => void,
): Chart {
  requireColumn(rows, xColumn);
  const constants = constantRows(rows);
  if (constants.length === 0) {
    throw new Error("aggregate csv has no constant-fee rows (b = f)");
  }
  const points: Point[] = constants.map((r) => ({
    x: r[xColumn],
    y: r[LOSS_COLUMN],
    label: `${r.f_bps}bps`,
  }));
  const segments: Segment[] = [];
  const crosses: Point[] = [];

  if (m !== null) {
    for (const [f, group] of slopeGroups(rows, m)) {
      const xs = group.map((r) => r[xColumn]);
      const ys = group.map((r) => r[LOSS_COLUMN]);
      if (group.length < 2) {
        warn(`group f=${f}bps m=${m} has a single point; drawing it as a point`);
        crosses.push({ x: xs[0], y: ys[0] });
        continue;
      }
      const fit = leastSquares(xs, ys);
      const lo = Math.min(...xs);
      const hi = Math.max(...xs); // the b = f member sits at the high end
      segments.push({
        x1: lo,
        y1: fit.slope * lo + fit.intercept,
        x2: hi,
        y2: fit.slope * hi + fit.intercept,
        label: `f=${f}`,
      });
      if (showPoints) {
        crosses.push(...group.map((r) => ({ x: r[xColumn], y: r[LOSS_COLUMN] })));
      }
    }
  }

  return {
    title,
    xLabel,
    yLabel: "mean loss (Y units)",
    caption: `config ${provenance.config_sha256}  master seed ${provenance.master_seed}`,
    metadata: {
      config_sha256: provenance.config_sha256,
      master_seed: provenance.master_seed,
      x_metric: xColumn,
      y_metric: LOSS_COLUMN,
    },
    points,
    crosses,
    segments,
  };
}

export function buildFigure(options: FigureOptions): string {
  const warn = options.warn ?? ((message: string) => console.error(`warning: ${message}`));
  const rows = readAggregateCsv(options.aggregatePath);
  const provenance = readProvenance(
    options.aggregatePath,
    options.allowMissingManifest ?? false,
  );
  const showPoints = options.showPoints ?? false;

  switch (options.fig) {
    case 3:
      return renderChart(
        frontierChart(
          rows,
          DEVIATION_COLUMN,
          "rms price deviation (bps)",
          "Constant-fee frontier",
          null,
          provenance,
          showPoints,
          warn,
        ),
      );
    case 4:
    case 5: {
      const m = options.m ?? (options.fig === 4 ? -1 : -0.8);
      return renderChart(
        frontierChart(
          rows,
          DEVIATION_COLUMN,
          "rms price deviation (bps)",
          `Tapered-fee trend lines (m = ${m})`,
          m,
          provenance,
          showPoints,
          warn,
        ),
      );
    }
    case 6:
    case 7: {
      const m = options.m ?? (options.fig === 6 ? -1 : -0.8);
      const quantile = options.quantile ?? (options.fig === 6 ? 0.5 : 0.95);
      const column = slippageColumn(quantile);
      return renderChart(
        frontierChart(
          rows,
          column,
          `rms slippage (fraction, probe q=${quantile})`,
          `Slippage frontier (m = ${m}, probe q = ${quantile})`,
          m,
          provenance,
          showPoints,
          warn,
        ),
      );
    }
    default:
      throw new Error(`unknown figure id ${options.fig}; expected 3-7`);
  }
}
