"""Data files behind the five figures, written to one directory.

    python scripts/figure_data.py --out-dir results/figures --k-max 100
"""

import argparse
import os
import sys
from dataclasses import dataclass

from poissonk.cli import main as cli_main


@dataclass(frozen=True)
class Config:
    out_dir: str = "results/figures"
    k_min: int = 2
    k_max: int = 100
    fmt: str = "csv"


def run(cfg: Config) -> int:
    os.makedirs(cfg.out_dir, exist_ok=True)
    status = 0
    for fig in range(1, 6):
        path = os.path.join(cfg.out_dir, f"figure{fig}.{cfg.fmt}")
        argv = ["figure", "--id", str(fig), "--format", cfg.fmt, "--out", path]
        if fig == 1:
            argv += ["--n-max", "130"]
        else:
            argv += ["--k-min", str(cfg.k_min), "--k-max", str(cfg.k_max)]
        code = cli_main(argv)
        print(f"figure {fig}: {path} (exit {code})", file=sys.stderr)
        status = status or code
    return status


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default=Config.out_dir)
    ap.add_argument("--k-min", type=int, default=Config.k_min)
    ap.add_argument("--k-max", type=int, default=Config.k_max)
    ap.add_argument("--format", dest="fmt", choices=("csv", "json"), default=Config.fmt)
    a = ap.parse_args(argv)
    sys.exit(run(Config(a.out_dir, a.k_min, a.k_max, a.fmt)))


if __name__ == "__main__":
    main()
