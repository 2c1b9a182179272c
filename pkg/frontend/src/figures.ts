/**
 * Figure builders: each returns the plotted series alongside the rendered
 * SVG so tests and downstream tooling can read back the numbers instead of
 * scraping pixels.
 */
import { HeatCell, MetricsRow, SchemaError } from "./schema";
import { buildSeries, Series, XField } from "./series";
import { renderHeatmap, renderLineChart } from "./svg";

export interface RateFigureOptions {
  schemes?: string[];
  logY?: boolean;
}

export interface RateFigure {
  xField: XField;
  series: Series[];
  svg: string;
}

const X_LABELS: Record<XField, string> = {
  tx_dbm: "transmit power (dBm)",
  K: "number of users",
  N: "reconfiguration interval (slots)",
};

function requireDistinctX(series: Series[], xField: XField, min: number): void {
  const xs = new Set(series.flatMap((s) => s.points.map((p) => p.x)));
  if (xs.size < min) {
    throw new SchemaError(
      `need at least ${min} distinct ${xField} values, found ${xs.size}`
    );
  }
}

export function rateFigure(
  rows: MetricsRow[],
  xField: "tx_dbm" | "K",
  opts: RateFigureOptions = {}
): RateFigure {
  const series = buildSeries(rows, xField, "rate_bps", opts.schemes);
  requireDistinctX(series, xField, 2);
  const svg = renderLineChart({
    title:
      xField === "tx_dbm" ? "Sum rate vs transmit power" : "Sum rate vs users",
    xLabel: X_LABELS[xField],
    yLabel: "mean sum rate (bit/s)",
    series,
    logY: opts.logY,
  });
  return { xField, series, svg };
}

export interface CostPanel {
  series: Series[];
  svg: string;
}

export interface CostFigures {
  movement: CostPanel;
  time: CostPanel;
}

export function costFigures(
  rows: MetricsRow[],
  opts: { schemes?: string[] } = {}
): CostFigures {
  const movement = buildSeries(rows, "N", "move_steps", opts.schemes);
  requireDistinctX(movement, "N", 2);
  const time = buildSeries(rows, "N", "time_steps", opts.schemes);
  return {
    movement: {
      series: movement,
      svg: renderLineChart({
        title: "Movement cost vs reconfiguration interval",
        xLabel: X_LABELS.N,
        yLabel: "mean movement steps per period",
        series: movement,
      }),
    },
    time: {
      series: time,
      svg: renderLineChart({
        title: "Reconfiguration time vs interval",
        xLabel: X_LABELS.N,
        yLabel: "mean time steps per period",
        series: time,
      }),
    },
  };
}

export interface HeatFigure {
  cells: HeatCell[];
  maxCell: HeatCell;
  svg: string;
}

export function heatmapFigure(cells: HeatCell[]): HeatFigure {
  if (cells.length === 0) {
    throw new SchemaError("empty selection: heatmap table has no cells");
  }
  // first row attaining the maximum wins, so ties stay deterministic
  let maxCell = cells[0];
  for (const cell of cells) {
    if (cell.best_rate_bps > maxCell.best_rate_bps) {
      maxCell = cell;
    }
  }
  const svg = renderHeatmap({
    title: "Per-cell best profiled rate",
    cells,
    maxCell,
  });
  return { cells, maxCell, svg };
}
