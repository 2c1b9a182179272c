/**
 * Minimal deterministic SVG chart writer.
 *
 * No DOM, no timestamps, no randomness: the same inputs produce the same
 * bytes, which is what makes figure output diffable across runs.
 */
import { HeatCell } from "./schema";
import { Series } from "./series";

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 24, bottom: 58, left: 92 };

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function px(v: number): string {
  return v.toFixed(2);
}

export function fmtValue(v: number): string {
  if (v === 0) {
    return "0";
  }
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) {
    return v.toExponential(2);
  }
  return String(Number(v.toPrecision(6)));
}

/** Tick positions at 1/2/5 steps covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, want = 6): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const raw = span / Math.max(want - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm <= 1 ? 1 : norm <= 2 ? 2 : norm <= 5 ? 5 : 10) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    const v = Math.pow(10, e);
    if (v >= lo / (1 + 1e-12) && v <= hi * (1 + 1e-12)) {
      ticks.push(v);
    }
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

export interface LineChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  logY?: boolean;
}

export function renderLineChart(opts: LineChartOptions): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;

  const xs = [...new Set(opts.series.flatMap((s) => s.points.map((p) => p.x)))]
    .sort((a, b) => a - b);
  const los = opts.series.flatMap((s) => s.points.map((p) => p.mean - p.std));
  const his = opts.series.flatMap((s) => s.points.map((p) => p.mean + p.std));
  let yLo = Math.min(...los);
  let yHi = Math.max(...his);
  if (opts.logY && yLo <= 0) {
    throw new Error("log scale requires positive values");
  }
  if (yLo === yHi) {
    // flat data still needs a nonzero vertical extent
    yLo -= Math.abs(yLo) * 0.5 || 1;
    yHi += Math.abs(yHi) * 0.5 || 1;
  }
  const pad = opts.logY ? 0 : 0.05 * (yHi - yLo);
  yLo -= pad;
  yHi += pad;

  const xLo = xs[0];
  const xHi = xs[xs.length - 1];
  const sx = (v: number) =>
    MARGIN.left + (xHi === xLo ? plotW / 2 : ((v - xLo) / (xHi - xLo)) * plotW);
  const sy = (v: number) => {
    const t = opts.logY
      ? (Math.log10(v) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo))
      : (v - yLo) / (yHi - yLo);
    return MARGIN.top + plotH - t * plotH;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
      `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="26" text-anchor="middle" font-size="16">` +
      `${esc(opts.title)}</text>`
  );

  const yTicks = opts.logY ? logTicks(yLo, yHi) : niceTicks(yLo, yHi);
  for (const t of yTicks) {
    const y = px(sy(t));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" ` +
        `y2="${y}" stroke="#dddddd"/>`
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${y}" text-anchor="end" ` +
        `dominant-baseline="middle" font-size="11">${fmtValue(t)}</text>`
    );
  }
  for (const t of xs) {
    const x = px(sx(t));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" ` +
        `y2="${MARGIN.top + plotH + 5}" stroke="#333333"/>`
    );
    parts.push(
      `<text x="${x}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" ` +
        `font-size="11">${fmtValue(t)}</text>`
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" ` +
      `height="${plotH}" fill="none" stroke="#333333"/>`
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" ` +
      `text-anchor="middle" font-size="13">${esc(opts.xLabel)}</text>`
  );
  parts.push(
    `<text x="22" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `font-size="13" transform="rotate(-90 22 ${MARGIN.top + plotH / 2})">` +
      `${esc(opts.yLabel)}</text>`
  );

  opts.series.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = series.points;
    if (pts.some((p) => p.std > 0)) {
      const fwd = pts.map((p) => `${px(sx(p.x))},${px(sy(p.mean + p.std))}`);
      const back = [...pts]
        .reverse()
        .map((p) => `${px(sx(p.x))},${px(sy(p.mean - p.std))}`);
      parts.push(
        `<polygon points="${fwd.concat(back).join(" ")}" fill="${color}" ` +
          `fill-opacity="0.15" stroke="none"/>`
      );
    }
    const line = pts.map((p) => `${px(sx(p.x))},${px(sy(p.mean))}`).join(" ");
    parts.push(
      `<polyline class="series" points="${line}" fill="none" ` +
        `stroke="${color}" stroke-width="2"/>`
    );
    for (const p of pts) {
      parts.push(
        `<circle cx="${px(sx(p.x))}" cy="${px(sy(p.mean))}" r="3.5" ` +
          `fill="${color}"/>`
      );
    }
  });

  const legendX = MARGIN.left + 12;
  opts.series.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = MARGIN.top + 16 + i * 18;
    parts.push(
      `<line x1="${legendX}" y1="${y}" x2="${legendX + 22}" y2="${y}" ` +
        `stroke="${color}" stroke-width="2"/>`
    );
    parts.push(
      `<text class="legend" x="${legendX + 28}" y="${y + 4}" ` +
        `font-size="12">${esc(series.scheme)}</text>`
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function lerpColor(t: number): string {
  // light -> dark blue ramp
  const c0 = [247, 251, 255];
  const c1 = [8, 48, 107];
  const rgb = c0.map((v, i) => Math.round(v + (c1[i] - v) * t));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

export interface HeatmapOptions {
  title: string;
  cells: HeatCell[];
  maxCell: HeatCell;
}

export function renderHeatmap(opts: HeatmapOptions): string {
  const nx = Math.max(...opts.cells.map((c) => c.gx)) + 1;
  const ny = Math.max(...opts.cells.map((c) => c.gy)) + 1;
  const rates = opts.cells.map((c) => c.best_rate_bps);
  const lo = Math.min(...rates);
  const hi = Math.max(...rates);

  const cellPx = Math.floor(Math.min(600 / nx, 560 / ny));
  const width = nx * cellPx + 140;
  const height = ny * cellPx + 90;
  const x0 = 70;
  const y0 = 60;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
      `height="${height}" viewBox="0 0 ${width} ${height}" ` +
      `font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="16">` +
      `${esc(opts.title)}</text>`
  );
  parts.push(
    `<text x="${width / 2}" y="44" text-anchor="middle" font-size="12">` +
      `max ${fmtValue(opts.maxCell.best_rate_bps)} at cell ` +
      `(${opts.maxCell.gx},${opts.maxCell.gy})</text>`
  );

  for (const cell of opts.cells) {
    const t = hi === lo ? 0.5 : (cell.best_rate_bps - lo) / (hi - lo);
    // gy drawn bottom-up so the origin cell sits at the lower left
    const x = x0 + cell.gx * cellPx;
    const y = y0 + (ny - 1 - cell.gy) * cellPx;
    parts.push(
      `<rect class="cell" x="${x}" y="${y}" width="${cellPx}" ` +
        `height="${cellPx}" fill="${lerpColor(t)}"/>`
    );
  }
  const mx = x0 + opts.maxCell.gx * cellPx;
  const my = y0 + (ny - 1 - opts.maxCell.gy) * cellPx;
  parts.push(
    `<rect class="max-cell" x="${mx}" y="${my}" width="${cellPx}" ` +
      `height="${cellPx}" fill="none" stroke="#d62728" stroke-width="2"/>`
  );
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${nx * cellPx}" ` +
      `height="${ny * cellPx}" fill="none" stroke="#333333"/>`
  );
  parts.push(
    `<text x="${x0 + (nx * cellPx) / 2}" y="${height - 16}" ` +
      `text-anchor="middle" font-size="12">grid x index</text>`
  );
  parts.push(
    `<text x="30" y="${y0 + (ny * cellPx) / 2}" text-anchor="middle" ` +
      `font-size="12" transform="rotate(-90 30 ${y0 + (ny * cellPx) / 2})">` +
      `grid y index</text>`
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
