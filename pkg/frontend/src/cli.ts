#!/usr/bin/env node
/**
 * report <subcommand> --in <csv> --out <dir>
 *
 * Subcommands:
 *   rate-vs-power     one line per scheme, mean sum rate over seeds vs tx power
 *   rate-vs-users     same, with the user count K on the x axis
 *   cost-vs-interval  movement and time panels vs the interval N
 *   heatmap           per-cell best-rate grid from the exported heatmap table
 *
 * Options: --schemes a,b (subset filter), --log-y (rate figures only).
 */
import * as fs from "fs";
import * as path from "path";

import { costFigures, heatmapFigure, rateFigure } from "./figures";
import { readHeatmap, readMetrics, SchemaError } from "./schema";

const USAGE =
  "usage: report <rate-vs-power|rate-vs-users|cost-vs-interval|heatmap> " +
  "--in <csv> --out <dir> [--schemes a,b] [--log-y]";

interface Args {
  command: string;
  infile: string;
  outDir: string;
  schemes?: string[];
  logY: boolean;
}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0) {
    throw new SchemaError(USAGE);
  }
  const [command, ...rest] = argv;
  const args: Args = { command, infile: "", outDir: "", logY: false };
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i];
    if (flag === "--log-y") {
      args.logY = true;
    } else if (flag === "--in" || flag === "--out" || flag === "--schemes") {
      const value = rest[++i];
      if (value === undefined) {
        throw new SchemaError(`missing value for ${flag}`);
      }
      if (flag === "--in") {
        args.infile = value;
      } else if (flag === "--out") {
        args.outDir = value;
      } else {
        args.schemes = value.split(",").filter((s) => s.length > 0);
      }
    } else {
      throw new SchemaError(`unknown option ${flag}\n${USAGE}`);
    }
  }
  if (!args.infile || !args.outDir) {
    throw new SchemaError(`--in and --out are required\n${USAGE}`);
  }
  return args;
}

function write(outDir: string, name: string, svg: string): string {
  fs.mkdirSync(outDir, { recursive: true });
  const file = path.join(outDir, name);
  fs.writeFileSync(file, svg);
  return file;
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const written: string[] = [];
    switch (args.command) {
      case "rate-vs-power":
      case "rate-vs-users": {
        const rows = readMetrics(args.infile);
        const fig = rateFigure(rows, args.command === "rate-vs-power" ? "tx_dbm" : "K", {
          schemes: args.schemes,
          logY: args.logY,
        });
        written.push(write(args.outDir, `${args.command.replace(/-/g, "_")}.svg`, fig.svg));
        break;
      }
      case "cost-vs-interval": {
        const rows = readMetrics(args.infile);
        const figs = costFigures(rows, { schemes: args.schemes });
        written.push(write(args.outDir, "cost_movement.svg", figs.movement.svg));
        written.push(write(args.outDir, "cost_time.svg", figs.time.svg));
        break;
      }
      case "heatmap": {
        const fig = heatmapFigure(readHeatmap(args.infile));
        written.push(write(args.outDir, "heatmap.svg", fig.svg));
        break;
      }
      default:
        throw new SchemaError(`unknown subcommand "${args.command}"\n${USAGE}`);
    }
    for (const file of written) {
      console.log(file);
    }
    return 0;
  } catch (err) {
    const msg =
      err instanceof SchemaError || err instanceof Error
        ? err.message
        : String(err);
    console.error(`error: ${msg}`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
