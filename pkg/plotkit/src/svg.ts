/**
 * Minimal deterministic SVG scatter/line renderer. No drawing library;
 * output is a plain string so tests can assert on exact content.
 */

export interface Point {
  x: number;
  y: number;
  label?: string;
}

export interface Segment {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  label?: string;
}

export interface Chart {
  title: string;
  xLabel: string;
  yLabel: string;
  caption: string;
  metadata: Record<string, string | number>;
  points: Point[];
  crosses: Point[];
  segments: Segment[];
}

const WIDTH = 760;
const HEIGHT = 560;
const MARGIN = { top: 50, right: 30, bottom: 70, left: 80 };

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function makeScale(values: number[], outLo: number, outHi: number): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = 0.06 * (hi - lo);
  lo -= pad;
  hi += pad;
  const scale = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  const step = (hi - lo) / 5;
  scale.ticks = Array.from({ length: 6 }, (_, i) => lo + i * step);
  return scale;
}

export function renderChart(chart: Chart): string {
  const xs = [...chart.points, ...chart.crosses].map((p) => p.x);
  const ys = [...chart.points, ...chart.crosses].map((p) => p.y);
  for (const s of chart.segments) {
    xs.push(s.x1, s.x2);
    ys.push(s.y1, s.y2);
  }
  if (xs.length === 0) {
    throw new Error("nothing to draw");
  }
  const sx = makeScale(xs, MARGIN.left, WIDTH - MARGIN.right);
  const sy = makeScale(ys, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<metadata>${JSON.stringify(chart.metadata)}</metadata>`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16" font-family="sans-serif">${chart.title}</text>`,
  );

  // axes with ticks
  const x0 = MARGIN.left;
  const y0 = HEIGHT - MARGIN.bottom;
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${WIDTH - MARGIN.right}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`,
  );
  for (const t of sx.ticks) {
    const px = sx(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="black"/>`,
      `<text x="${fmt(px)}" y="${y0 + 20}" text-anchor="middle" font-size="11" font-family="sans-serif">${fmt(t)}</text>`,
    );
  }
  for (const t of sy.ticks) {
    const py = sy(t);
    parts.push(
      `<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>`,
      `<text x="${x0 - 8}" y="${fmt(py + 4)}" text-anchor="end" font-size="11" font-family="sans-serif">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 30}" text-anchor="middle" font-size="13" font-family="sans-serif">${chart.xLabel}</text>`,
    `<text x="20" y="${(MARGIN.top + y0) / 2}" text-anchor="middle" font-size="13" font-family="sans-serif" transform="rotate(-90 20 ${(MARGIN.top + y0) / 2})">${chart.yLabel}</text>`,
  );

  for (const s of chart.segments) {
    parts.push(
      `<line x1="${fmt(sx(s.x1))}" y1="${fmt(sy(s.y1))}" x2="${fmt(sx(s.x2))}" y2="${fmt(sy(s.y2))}" stroke="steelblue" stroke-width="1.5"/>`,
    );
    if (s.label) {
      parts.push(
        `<text x="${fmt(sx(s.x1) - 4)}" y="${fmt(sy(s.y1) - 4)}" text-anchor="end" font-size="10" font-family="sans-serif" fill="steelblue">${s.label}</text>`,
      );
    }
  }
  for (const p of chart.points) {
    parts.push(`<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.y))}" r="4" fill="crimson"/>`);
    if (p.label) {
      parts.push(
        `<text x="${fmt(sx(p.x) + 6)}" y="${fmt(sy(p.y) - 6)}" font-size="10" font-family="sans-serif">${p.label}</text>`,
      );
    }
  }
  for (const p of chart.crosses) {
    const cx = sx(p.x);
    const cy = sy(p.y);
    parts.push(
      `<path d="M ${fmt(cx - 3)} ${fmt(cy - 3)} L ${fmt(cx + 3)} ${fmt(cy + 3)} M ${fmt(cx - 3)} ${fmt(cy + 3)} L ${fmt(cx + 3)} ${fmt(cy - 3)}" stroke="gray" stroke-width="1"/>`,
    );
  }

  parts.push(
    `<text x="${WIDTH / 2}" y="${HEIGHT - 10}" text-anchor="middle" font-size="10" font-family="sans-serif" fill="dimgray">${chart.caption}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
