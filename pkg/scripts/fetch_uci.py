#!/usr/bin/env python3
"""Download the UCI datasets the experiments use and convert them to CSV.

Writes, under data/:
  iris.csv           150 examples, 4 numeric attributes + class
  soybean-small.csv  Michalski's small soybean set, 35 attributes + class
  soybean-large.csv  307 examples, 19 classes, '?' marks missing values

The soybean files put the class column last and add a header with the 35
canonical attribute names.  Run from the repository root:

    python scripts/fetch_uci.py [--dest data]
"""

import argparse
import csv
import io
import sys
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

SOYBEAN_ATTRIBUTES = [
    "date", "plant_stand", "precip", "temp", "hail", "crop_hist", "area_damaged",
    "severity", "seed_tmt", "germination", "plant_growth", "leaves",
    "leafspots_halo", "leafspots_marg", "leafspots_size", "leaf_shread",
    "leaf_malf", "leaf_mild", "stem", "lodging", "stem_cankers", "canker_lesion",
    "fruiting_bodies", "external_decay", "mycelium", "int_discolor", "sclerotia",
    "fruit_pods", "fruit_spots", "seed", "mold_growth", "seed_discolor",
    "seed_size", "shriveling", "roots",
]

IRIS_ATTRIBUTES = ["sepal_length", "sepal_width", "petal_length", "petal_width"]


def fetch(url: str) -> str:
    print(f"fetching {url}")
    with urllib.request.urlopen(url, timeout=60) as response:
        return response.read().decode("utf-8")


def convert_class_first(raw: str, attributes: list[str]) -> str:
    """UCI soybean rows lead with the class name; we put it last."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(attributes + ["class"])
    for line in raw.splitlines():
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(attributes) + 1:
            raise SystemExit(f"unexpected row width {len(cells)} in soybean data")
        writer.writerow(cells[1:] + cells[:1])
    return out.getvalue()


def convert_class_last(raw: str, attributes: list[str]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(attributes + ["class"])
    for line in raw.splitlines():
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(attributes) + 1:
            raise SystemExit(f"unexpected row width {len(cells)} in iris data")
        writer.writerow(cells)
    return out.getvalue()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data")
    args = parser.parse_args(argv)
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)

    iris = convert_class_last(fetch(f"{UCI}/iris/iris.data"), IRIS_ATTRIBUTES)
    (dest / "iris.csv").write_text(iris)

    small = convert_class_first(fetch(f"{UCI}/soybean/soybean-small.data"), SOYBEAN_ATTRIBUTES)
    (dest / "soybean-small.csv").write_text(small)

    large = convert_class_first(fetch(f"{UCI}/soybean/soybean-large.data"), SOYBEAN_ATTRIBUTES)
    (dest / "soybean-large.csv").write_text(large)

    for name in ("iris.csv", "soybean-small.csv", "soybean-large.csv"):
        rows = (dest / name).read_text().count("\n") - 1
        print(f"wrote {dest / name}: {rows} examples")
    return 0


if __name__ == "__main__":
    sys.exit(main())
