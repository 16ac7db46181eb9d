"""CSV output shared by the experiment scripts."""

import argparse
import csv
from pathlib import Path


def parser(description, default_name):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out", type=Path, default=Path("results") / default_name, help="CSV path")
    return p


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def write_csv(path: Path, rows, columns):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])
    print(f"wrote {len(rows)} rows to {path}")
