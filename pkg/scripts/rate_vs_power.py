#!/usr/bin/env python3
"""Run the rate-versus-transmit-power experiment and print the mean-rate table.

Writes metrics.csv / summary.json / audit.jsonl under --out-dir and prints one
row per (scheme, tx_dbm) with the seed-averaged sum rate.
"""

import argparse
import json
import os
import sys
from collections import defaultdict

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(REPO, "src"))

from sixdma.cli import main as cli_main


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config",
                    default=os.path.join(REPO, "configs", "rate_vs_power.yaml"))
    ap.add_argument("--out-dir", default=os.path.join(REPO, "out", "rate_vs_power"))
    ap.add_argument("--seed", help="comma-separated seed override")
    args = ap.parse_args(argv)

    cli_args = ["run", "--config", args.config, "--out-dir", args.out_dir,
                "--quiet"]
    if args.seed:
        cli_args += ["--seed", args.seed]
    rc = cli_main(cli_args)
    if rc != 0:
        return rc

    with open(os.path.join(args.out_dir, "summary.json")) as fh:
        runs = json.load(fh)["runs"]

    acc = defaultdict(list)
    for r in runs:
        acc[(r["scheme"], r["tx_dbm"])].append(r["mean_rate_bps"])

    print(f"{'scheme':<14} {'tx_dbm':>7} {'mean_rate_mbps':>15} {'seeds':>6}")
    for (scheme, tx), rates in sorted(acc.items()):
        mean = sum(rates) / len(rates)
        print(f"{scheme:<14} {tx:>7.1f} {mean / 1e6:>15.2f} {len(rates):>6}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
