#!/usr/bin/env python3
"""Run the movement/time cost experiment over reconfiguration intervals N.

Writes metrics under --out-dir, then prints the per-(scheme, N) cost table via
the cost-report subcommand.
"""

import argparse
import os
import sys

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(REPO, "src"))

from sixdma.cli import main as cli_main


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config",
                    default=os.path.join(REPO, "configs", "cost_vs_interval.yaml"))
    ap.add_argument("--out-dir",
                    default=os.path.join(REPO, "out", "cost_vs_interval"))
    ap.add_argument("--seed", help="comma-separated seed override")
    args = ap.parse_args(argv)

    cli_args = ["run", "--config", args.config, "--out-dir", args.out_dir,
                "--quiet"]
    if args.seed:
        cli_args += ["--seed", args.seed]
    rc = cli_main(cli_args)
    if rc != 0:
        return rc

    metrics = os.path.join(args.out_dir, "metrics.csv")
    table = os.path.join(args.out_dir, "cost_report.csv")
    return cli_main(["cost-report", "--in", metrics, "--out", table])


if __name__ == "__main__":
    sys.exit(run())
