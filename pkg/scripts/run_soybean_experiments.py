#!/usr/bin/env python3
"""The three soybean experiments: accuracy, multi-attribute, pruning sweep.

Needs data/soybean-small.csv and data/soybean-large.csv; fetch them once
with scripts/fetch_uci.py.

    python scripts/run_soybean_experiments.py [--seed 7] [--outdir results]
"""

import argparse
import sys
from pathlib import Path

from cltree.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", default="7")
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args(argv)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    small = ROOT / "data" / "soybean-small.csv"
    large = ROOT / "data" / "soybean-large.csv"
    for path in (small, large):
        if not path.exists():
            print(f"missing {path}; run scripts/fetch_uci.py first", file=sys.stderr)
            return 2

    common = [
        "--class", "class",
        "--nominal", "*",
        "--mode", "unsupervised",
        "--split-score", "weighted_between_ss",
        "--f-alpha", "0.5",
        "--prune", "on",
        "--validation-fraction", "0.25",
        "--seed", args.seed,
    ]
    rc = cli_main(["xval", "--data", str(small), "--k", "10",
                   "--out", str(outdir / "soybean_small")] + common)
    if rc:
        return rc
    rc = cli_main(["experiment", "--name", "multi_attribute", "--data", str(large),
                   "--k", "10", "--out", str(outdir / "soybean_large")] + common)
    if rc:
        return rc
    return cli_main(["experiment", "--name", "pruning_sweep", "--data", str(large),
                     "--k", "10", "--fractions", "0.15,0.25,0.35",
                     "--out", str(outdir / "soybean_large")] + common)


if __name__ == "__main__":
    sys.exit(main())
