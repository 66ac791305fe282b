#!/usr/bin/env python3
"""Download the UCI datasets used by `deeprules experiment --suite uci`.

Tries the UCI repository first. When it is unreachable, falls back to the
copies shipped inside the Orange 2.7 source distribution on PyPI (car,
tic-tac-toe and vote only). Output: header + comma-separated rows, class in
the last column, '?' for missing values.
"""

import argparse
import csv
import io
import sys
import tarfile
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases/"
ORANGE_SDIST = ("https://files.pythonhosted.org/packages/7d/a7/"
                "cd5c54f8e7c4f1c4ae16eefc9ff837d00266f50e3d9d0d50a3374b704274/Orange-2.7.tar.gz")

VOTE_COLUMNS = [
    "handicapped-infants", "water-project-cost-sharing", "adoption-of-the-budget-resolution",
    "physician-fee-freeze", "el-salvador-aid", "religious-groups-in-schools", "anti-satellite-test-ban",
    "aid-to-nicaraguan-contras", "mx-missile", "immigration", "synfuels-corporation-cutback",
    "education-spending", "superfund-right-to-sue", "crime", "duty-free-exports",
    "export-administration-act-south-africa",
]

# name -> (UCI path, header, index of the class column in the raw file, Orange file)
DATASETS = {
    "car-evaluation": ("car/car.data",
                       ["buying", "maint", "doors", "persons", "lugboot", "safety", "y"], 6, "car.tab"),
    "tic-tac-toe": ("tic-tac-toe/tic-tac-toe.data",
                    ["tl", "tm", "tr", "ml", "mm", "mr", "bl", "bm", "br", "y"], 9, "tic_tac_toe.tab"),
    "vote": ("voting-records/house-votes-84.data", VOTE_COLUMNS + ["party"], 0, "voting.tab"),
}

# UCI spells the tic-tac-toe classes out; the Orange copy uses p/n.
TTT_CLASSES = {"positive": "p", "negative": "n"}


def fetch(url, timeout):
    with urllib.request.urlopen(url, timeout=timeout) as r:
        return r.read()


def rows_from_uci(text, class_index, name):
    rows = []
    for rec in csv.reader(io.StringIO(text)):
        if not rec:
            continue
        rec = [v.strip() for v in rec]
        cls = rec.pop(class_index)
        if name == "tic-tac-toe":
            cls = TTT_CLASSES.get(cls, cls)
        rows.append(rec + [cls])
    return rows


def rows_from_tab(text, class_name):
    lines = text.splitlines()
    header = lines[0].split("\t")
    ci = header.index(class_name)
    rows = []
    for line in lines[3:]:
        if not line.strip():
            continue
        rec = [v.strip() or "?" for v in line.split("\t")]
        rec += ["?"] * (len(header) - len(rec))
        cls = rec.pop(ci)
        rows.append(rec + [cls])
    return rows


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data/uci", help="output directory (default data/uci)")
    ap.add_argument("--timeout", type=float, default=20.0)
    ap.add_argument("names", nargs="*", default=sorted(DATASETS), help="datasets (default: all)")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    orange = None
    for name in args.names:
        if name not in DATASETS:
            sys.exit(f"unknown dataset {name!r}; known: {', '.join(sorted(DATASETS))}")
        uci_path, header, class_index, tab = DATASETS[name]
        try:
            rows = rows_from_uci(fetch(UCI + uci_path, args.timeout).decode(), class_index, name)
            source = UCI + uci_path
        except OSError as e:
            print(f"{name}: UCI unavailable ({e}); using the Orange 2.7 copy", file=sys.stderr)
            if orange is None:
                orange = tarfile.open(fileobj=io.BytesIO(fetch(ORANGE_SDIST, args.timeout * 6)))
            member = orange.extractfile(f"Orange-2.7/Orange/datasets/{tab}")
            rows = rows_from_tab(member.read().decode(), header[-1])
            source = ORANGE_SDIST + "#" + tab
        write(out / f"{name}.csv", header, rows)
        print(f"{out / (name + '.csv')}: {len(rows)} rows from {source}")


if __name__ == "__main__":
    main()
