"""Excluded-value tables for k = 2..41 plus the first-double-mode regimes.

    python scripts/reproduce_tables.py --out results/tables.csv
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from poissonk.search import excluded_values, first_double_mode


@dataclass(frozen=True)
class Config:
    k_min: int = 2
    k_max: int = 41
    out: str | None = None


def run(cfg: Config):
    rows = []
    for k in range(cfg.k_min, cfg.k_max + 1):
        t0 = time.perf_counter()
        rep = excluded_values(k)
        dm = first_double_mode(k)
        rows.append(
            {
                "k": k,
                "m_hat": dm.m_hat,
                "lambda_hat": f"{dm.lambda_hat:.12f}",
                "intervals": rep.format(),
                "seconds": f"{time.perf_counter() - t0:.2f}",
            }
        )
        print(f"k={k:3d} m_hat={dm.m_hat:4d} {rep.format()}", file=sys.stderr)
    return rows


def write_csv(rows, path):
    def emit(fh):
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)

    if path is None:
        emit(sys.stdout)
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            emit(fh)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-min", type=int, default=Config.k_min)
    ap.add_argument("--k-max", type=int, default=Config.k_max)
    ap.add_argument("--out", default=None)
    a = ap.parse_args(argv)
    cfg = Config(a.k_min, a.k_max, a.out)
    write_csv(run(cfg), cfg.out)

if __name__ == "__main__":
    main()
