/**
 * Aggregation from per-period metrics rows to plottable series.
 *
 * A point is the mean over seeds of the per-seed means, so seeds with more
 * recorded periods do not get extra weight. The band is +/- one population
 * standard deviation across seeds.
 */
import { KNOWN_SCHEMES, MetricsRow, SchemaError } from "./schema";

export type XField = "tx_dbm" | "K" | "N";
export type YField = "rate_bps" | "move_steps" | "time_steps";

export interface SeriesPoint {
  x: number;
  mean: number;
  std: number;
  nSeeds: number;
}

export interface Series {
  scheme: string;
  points: SeriesPoint[];
}

function mean(xs: number[]): number {
  return xs.reduce((a, b) => a + b, 0) / xs.length;
}

function std(xs: number[]): number {
  const m = mean(xs);
  return Math.sqrt(mean(xs.map((v) => (v - m) * (v - m))));
}

export function filterSchemes(rows: MetricsRow[], schemes?: string[]): MetricsRow[] {
  if (!schemes || schemes.length === 0) {
    return rows;
  }
  for (const s of schemes) {
    if (!(KNOWN_SCHEMES as readonly string[]).includes(s)) {
      throw new SchemaError(`unknown scheme in filter: "${s}"`);
    }
  }
  return rows.filter((r) => schemes.includes(r.scheme));
}

/** One series per scheme, schemes in first-appearance order, x ascending. */
export function buildSeries(
  rows: MetricsRow[],
  xField: XField,
  yField: YField,
  schemes?: string[]
): Series[] {
  const selected = filterSchemes(rows, schemes);
  if (selected.length === 0) {
    throw new SchemaError("empty selection: no rows to plot");
  }

  const schemeOrder: string[] = [];
  // scheme -> x -> seed -> y values
  const groups = new Map<string, Map<number, Map<number, number[]>>>();
  for (const row of selected) {
    if (!groups.has(row.scheme)) {
      groups.set(row.scheme, new Map());
      schemeOrder.push(row.scheme);
    }
    const byX = groups.get(row.scheme)!;
    if (!byX.has(row[xField])) {
      byX.set(row[xField], new Map());
    }
    const bySeed = byX.get(row[xField])!;
    if (!bySeed.has(row.seed)) {
      bySeed.set(row.seed, []);
    }
    bySeed.get(row.seed)!.push(row[yField]);
  }

  return schemeOrder.map((scheme) => {
    const byX = groups.get(scheme)!;
    const xs = [...byX.keys()].sort((a, b) => a - b);
    const points = xs.map((x) => {
      const seedMeans = [...byX.get(x)!.values()].map(mean);
      return {
        x,
        mean: mean(seedMeans),
        std: std(seedMeans),
        nSeeds: seedMeans.length,
      };
    });
    return { scheme, points };
  });
}
