#!/usr/bin/env python3
"""Build (or reuse) the offline candidate library and export the per-grid
best-rate heatmap table."""

import argparse
import os
import sys

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(REPO, "src"))

from sixdma.cli import main as cli_main


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=os.path.join(REPO, "configs", "default.yaml"))
    ap.add_argument("--out-dir", default=os.path.join(REPO, "out", "heatmap"))
    args = ap.parse_args(argv)
    return cli_main(["export-heatmap", "--config", args.config,
                     "--out-dir", args.out_dir])


if __name__ == "__main__":
    sys.exit(run())
