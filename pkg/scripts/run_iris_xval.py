#!/usr/bin/env python3
"""Unsupervised 10-fold cross-validation on Iris with validation pruning.

The clustering tree never sees the class during induction; classes label
the leaves afterwards and accuracy is measured on the fold test sets.

    python scripts/run_iris_xval.py [--seed 7] [--out results/iris]
"""

import argparse
import sys
from pathlib import Path

from cltree.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", default="7")
    parser.add_argument("--out", default="results/iris")
    args = parser.parse_args(argv)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    return cli_main([
        "xval",
        "--data", str(ROOT / "data" / "iris.csv"),
        "--class", "class",
        "--mode", "unsupervised",
        "--split-score", "weighted_between_ss",
        "--f-alpha", "0.05",
        "--k", "10",
        "--prune", "on",
        "--validation-fraction", "0.25",
        "--seed", args.seed,
        "--out", args.out,
    ])


if __name__ == "__main__":
    sys.exit(main())
