/**
 * Typed views of the simulator's CSV artifacts.
 *
 * The metrics schema is a contract with the simulator CLI: the header must
 * match byte for byte, and scheme names outside the simulator's set are
 * treated as corrupt input rather than silently plotted.
 */
import * as fs from "fs";
import Papa from "papaparse";

export const METRICS_HEADER =
  "scheme,seed,K,tx_dbm,N,period,rate_bps,move_steps,time_steps,decision_ms";

export const HEATMAP_HEADER = "gx,gy,best_rate_bps";

export const KNOWN_SCHEMES = [
  "single_step",
  "full_reconfig",
  "rotation_only",
  "circular",
  "fpa",
] as const;

export type SchemeName = (typeof KNOWN_SCHEMES)[number];

export interface MetricsRow {
  scheme: SchemeName;
  seed: number;
  K: number;
  tx_dbm: number;
  N: number;
  period: number;
  rate_bps: number;
  move_steps: number;
  time_steps: number;
  decision_ms: number;
}

export interface HeatCell {
  gx: number;
  gy: number;
  best_rate_bps: number;
}

export class SchemaError extends Error {}

function parsed(text: string, expectedHeader: string) {
  const result = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const header = (result.meta.fields ?? []).join(",");
  if (header !== expectedHeader) {
    throw new SchemaError(
      `unexpected header "${header}"; expected "${expectedHeader}"`
    );
  }
  return result.data;
}

function num(raw: Record<string, string>, field: string, rowIdx: number): number {
  const value = Number(raw[field]);
  if (!Number.isFinite(value)) {
    throw new SchemaError(
      `row ${rowIdx + 1}: field ${field} is not numeric: "${raw[field]}"`
    );
  }
  return value;
}

export function parseMetricsCsv(text: string): MetricsRow[] {
  return parsed(text, METRICS_HEADER).map((raw, i) => {
    const scheme = raw.scheme as SchemeName;
    if (!KNOWN_SCHEMES.includes(scheme)) {
      throw new SchemaError(`row ${i + 1}: unknown scheme "${raw.scheme}"`);
    }
    return {
      scheme,
      seed: num(raw, "seed", i),
      K: num(raw, "K", i),
      tx_dbm: num(raw, "tx_dbm", i),
      N: num(raw, "N", i),
      period: num(raw, "period", i),
      rate_bps: num(raw, "rate_bps", i),
      move_steps: num(raw, "move_steps", i),
      time_steps: num(raw, "time_steps", i),
      decision_ms: num(raw, "decision_ms", i),
    };
  });
}

export function parseHeatmapCsv(text: string): HeatCell[] {
  return parsed(text, HEATMAP_HEADER).map((raw, i) => ({
    gx: num(raw, "gx", i),
    gy: num(raw, "gy", i),
    best_rate_bps: num(raw, "best_rate_bps", i),
  }));
}

export function readMetrics(path: string): MetricsRow[] {
  return parseMetricsCsv(fs.readFileSync(path, "utf-8"));
}

export function readHeatmap(path: string): HeatCell[] {
  return parseHeatmapCsv(fs.readFileSync(path, "utf-8"));
}
