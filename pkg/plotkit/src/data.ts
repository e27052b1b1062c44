/**
 * Reading and slicing sweep aggregate CSVs.
 *
 * The CSV schema is fixed by the simulator: f_bps,b_bps,m, mean_* metric
 * columns, optional mean_rms_slippage_q<impact> columns, worlds. Values are
 * plain (unquoted) decimal literals.
 */

import { readFileSync } from "node:fs";

export interface AggregateRow {
  f_bps: number;
  b_bps: number;
  m: number;
  [column: string]: number;
}

export const LOSS_COLUMN = "mean_loss";
export const DEVIATION_COLUMN = "mean_rms_deviation_bps";

/** Impact quantiles (probability -> bps) embedded for --quantile lookups. */
export const IMPACT_QUANTILES_BPS: ReadonlyMap<number, number> = new Map([
  [0.05, 0.0069],
  [0.25, 0.1021],
  [0.5, 3.7774],
  [0.75, 9.9981],
  [0.95, 10.7545],
  [0.99, 17.3149],
  [0.999, 69.2415],
  [0.9999, 212.1279],
]);

export function slippageColumn(quantileOrBps: number): string {
  const bps = IMPACT_QUANTILES_BPS.get(quantileOrBps) ?? quantileOrBps;
  // mirror the simulator's %.12g column labels
  let label = bps.toPrecision(12).replace(/\.?0+$/, "");
  if (label.includes("e")) label = String(bps);
  return `mean_rms_slippage_q${label}`;
}

export function readAggregateCsv(path: string): AggregateRow[] {
  const text = readFileSync(path, "utf8").trim();
  const lines = text.split(/\r?\n/);
  if (lines.length < 2) {
    throw new Error(`${path}: no data rows`);
  }
  const header = lines[0].split(",");
  for (const required of ["f_bps", "b_bps", "m", LOSS_COLUMN, DEVIATION_COLUMN]) {
    if (!header.includes(required)) {
      throw new Error(`${path}: missing column ${required}`);
    }
  }
  return lines.slice(1).map((line, i) => {
    const fields = line.split(",");
    if (fields.length !== header.length) {
      throw new Error(`${path}: row ${i + 2} has ${fields.length} fields, want ${header.length}`);
    }
    const row: AggregateRow = { f_bps: NaN, b_bps: NaN, m: NaN };
    header.forEach((name, j) => {
      const value = Number(fields[j]);
      if (!Number.isFinite(value)) {
        throw new Error(`${path}: row ${i + 2} column ${name} is not a number`);
      }
      row[name] = value;
    });
    return row;
  });
}

export function requireColumn(rows: AggregateRow[], column: string): void {
  if (rows.length === 0 || !(column in rows[0])) {
    throw new Error(`aggregate csv has no column ${column}`);
  }
}

/** Constant-fee rows (b = f), deduplicated by f (identical across slopes). */
export function constantRows(rows: AggregateRow[]): AggregateRow[] {
  const byF = new Map<number, AggregateRow>();
  for (const row of rows) {
    if (row.b_bps === row.f_bps && !byF.has(row.f_bps)) {
      byF.set(row.f_bps, row);
    }
  }
  return [...byF.values()].sort((a, b) => a.f_bps - b.f_bps);
}

/** Rows for one slope, grouped by initial fee, base fee ascending. */
export function slopeGroups(rows: AggregateRow[], m: number): Map<number, AggregateRow[]> {
  const slope = rows.filter((r) => r.m === m);
  if (slope.length === 0) {
    throw new Error(`aggregate csv has no rows with m = ${m}`);
  }
  const groups = new Map<number, AggregateRow[]>();
  for (const row of slope.sort((a, b) => a.f_bps - b.f_bps || a.b_bps - b.b_bps)) {
    const group = groups.get(row.f_bps) ?? [];
    group.push(row);
    groups.set(row.f_bps, group);
  }
  return groups;
}

export interface LinearFit {
  slope: number;
  intercept: number;
}

/** Ordinary least squares y = slope*x + intercept. Needs >= 2 points. */
export function leastSquares(xs: number[], ys: number[]): LinearFit {
  const n = xs.length;
  if (n < 2) {
    throw new Error(`least squares needs >= 2 points, got ${n}`);
  }
  const mx = xs.reduce((s, v) => s + v, 0) / n;
  const my = ys.reduce((s, v) => s + v, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx === 0) {
    throw new Error("least squares: x values are all identical");
  }
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}
