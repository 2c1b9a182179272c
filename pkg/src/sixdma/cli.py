"""Command line front end.

Subcommands:
  run             simulate the configured sweep and write metrics
  build-library   build (or reuse) the cached offline candidate library
  cost-report     aggregate movement/time statistics from a metrics CSV
  export-heatmap  per-grid best profiled rate table
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .config import ALL_SCHEMES, ConfigError, ScenarioConfig, \
    library_config_hash, load_config
from .profiler import LibraryLoadError, load_library, save_library, \
    write_heatmap_csv
from .simulate import RunResult, build_scenario_library, build_scenario_space, \
    run_sweep

CSV_HEADER = "scheme,seed,K,tx_dbm,N,period,rate_bps,move_steps,time_steps,decision_ms"


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    import dataclasses
    run = cfg.run
    sweep = cfg.sweep
    if args.seed:
        try:
            run = dataclasses.replace(run, seeds=tuple(
                int(s) for s in args.seed.split(",")))
        except ValueError:
            raise ConfigError(
                f"bad --seed {args.seed!r}; expected comma-separated integers")
    if getattr(args, "scheme", None):
        names = tuple(args.scheme.split(","))
        for n in names:
            if n not in ALL_SCHEMES:
                raise ConfigError(f"unknown scheme {n!r}")
        run = dataclasses.replace(run, schemes=names)
    for item in getattr(args, "sweep", None) or []:
        axis, _, vals = item.partition("=")
        if axis not in ("tx_dbm", "K", "N") or not vals:
            raise ConfigError(
                f"bad --sweep {item!r}; expected axis=v1,v2 with axis in"
                " tx_dbm|K|N")
        try:
            parsed = [float(v) if axis == "tx_dbm" else int(v)
                      for v in vals.split(",")]
        except ValueError:
            raise ConfigError(f"bad --sweep {item!r}; values must be numeric")
        sweep = dataclasses.replace(sweep, **{axis: tuple(parsed)})
    return dataclasses.replace(cfg, run=run, sweep=sweep)


def _ensure_library(config: ScenarioConfig, out_dir: str, space=None,
                    quiet: bool = False):
    os.makedirs(out_dir, exist_ok=True)
    h = library_config_hash(config)
    path = os.path.join(out_dir, f"library-{h}.json")
    if os.path.exists(path):
        lib = load_library(path)
        if not quiet:
            print(f"library cache hit: {path}")
        return lib, path
    lib = build_scenario_library(config, space)
    lib.config_hash = h
    save_library(lib, path)
    if not quiet:
        print(f"library built: {path}")
    return lib, path


def _write_metrics(results: list[RunResult], out_dir: str) -> str:
    path = os.path.join(out_dir, "metrics.csv")
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in results:
            for p in r.periods:
                ms = 1e3 * p.decision_s
                fh.write(f"{r.scheme},{r.seed},{r.K},{r.tx_dbm:g},{r.N},"
                         f"{p.period},{p.rate_bps:.3f},{p.move_steps},"
                         f"{p.time_steps},{ms:.3f}\n")
    return path


def cmd_run(args) -> int:
    config = _load(args)
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    space = build_scenario_space(config)
    library, _ = _ensure_library(config, out_dir, space, quiet=args.quiet)

    def progress(scheme, seed, tx, k, n):
        if not args.quiet:
            print(f"run scheme={scheme} seed={seed} tx={tx:g}dBm K={k} N={n}")

    results = run_sweep(config, space, library, progress=progress)
    metrics_path = _write_metrics(results, out_dir)

    summary = {"runs": [r.summary() for r in results]}
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)

    if config.run.write_audit:
        with open(os.path.join(out_dir, "audit.jsonl"), "w") as fh:
            for r in results:
                for row in r.audit:
                    fh.write(json.dumps(row, sort_keys=True) + "\n")

    if not args.quiet:
        print(f"wrote {metrics_path}")
    return 0


def cmd_build_library(args) -> int:
    config = _load(args)
    _, path = _ensure_library(config, args.out_dir, quiet=args.quiet)
    print(path)
    return 0


def cmd_export_heatmap(args) -> int:
    config = _load(args)
    library, _ = _ensure_library(config, args.out_dir, quiet=args.quiet)
    path = os.path.join(args.out_dir, "heatmap.csv")
    write_heatmap_csv(library, config.grid_spec(), path)
    print(path)
    return 0


def cmd_cost_report(args) -> int:
    rows = []
    with open(args.infile) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise SystemExit(f"unexpected metrics header in {args.infile}")
        rows = list(reader)

    groups: dict[tuple[str, str], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["scheme"], row["N"]), []).append(row)

    header = ("scheme", "N", "periods", "mean_rate_bps", "mean_move_steps",
              "max_move_steps", "mean_time_steps", "max_time_steps")
    table = []
    for (scheme, n), grp in sorted(groups.items()):
        moves = np.array([int(g["move_steps"]) for g in grp])
        times = np.array([int(g["time_steps"]) for g in grp])
        rates = np.array([float(g["rate_bps"]) for g in grp])
        table.append((scheme, n, len(grp), f"{rates.mean():.3f}",
                      f"{moves.mean():.4f}", int(moves.max()),
                      f"{times.mean():.4f}", int(times.max())))

    widths = [max(len(str(x)) for x in [h] + [row[i] for row in table])
              if table else len(h) for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in table:
        print("  ".join(str(x).ljust(w) for x, w in zip(row, widths)))

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(",".join(header) + "\n")
            for row in table:
                fh.write(",".join(str(x) for x in row) + "\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sixdma",
        description="movable-surface base station simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, schemes=True):
        p.add_argument("--config", help="scenario YAML (defaults used if omitted)")
        p.add_argument("--seed", help="comma-separated seed list override")
        p.add_argument("--out-dir", default="out")
        p.add_argument("--quiet", action="store_true")
        if schemes:
            p.add_argument("--scheme", help="comma-separated scheme subset")
            p.add_argument("--sweep", action="append",
                           help="override a sweep axis, e.g. tx_dbm=10,15,20,23")

    p_run = sub.add_parser("run", help="simulate the configured sweep")
    add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_lib = sub.add_parser("build-library", help="build or reuse the library")
    add_common(p_lib, schemes=False)
    p_lib.set_defaults(func=cmd_build_library)

    p_heat = sub.add_parser("export-heatmap",
                            help="write the per-grid best-rate table")
    add_common(p_heat, schemes=False)
    p_heat.set_defaults(func=cmd_export_heatmap)

    p_cost = sub.add_parser("cost-report",
                            help="aggregate movement stats from metrics")
    p_cost.add_argument("--in", dest="infile", required=True)
    p_cost.add_argument("--out", help="also write the table as CSV")
    p_cost.set_defaults(func=cmd_cost_report)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, LibraryLoadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
