"""Growth of the first double mode with k: fits of mean - m_hat and the mean.

    python scripts/fit_asymptotics.py --k-min 50 --k-max 1000 --points 12
"""

import argparse
import sys
import time
from dataclasses import dataclass

import numpy as np

from poissonk.fitting import linear_fit, mean_minus_mode_points, power_law_fit
from poissonk.search import first_double_mode
from reproduce_tables import write_csv


@dataclass(frozen=True)
class Config:
    k_min: int = 50
    k_max: int = 1000
    points: int = 12
    out: str | None = None

    def orders(self):
        """Log-spaced integer orders, duplicates removed."""
        return sorted({int(round(x)) for x in np.geomspace(self.k_min, self.k_max, self.points)})


def run(cfg: Config):
    results = []
    for k in cfg.orders():
        t0 = time.perf_counter()
        r = first_double_mode(k)
        results.append(r)
        print(f"k={k:5d} m_hat={r.m_hat:6d} mean={r.mean:10.3f} ({time.perf_counter() - t0:.1f}s)", file=sys.stderr)
    lin = linear_fit(mean_minus_mode_points(results))
    pw_mean = power_law_fit([(r.k, r.mean) for r in results])
    pw_mode = power_law_fit([(r.kappa, r.m_hat) for r in results])
    rows = []
    for name, fit in (("mean_minus_m_hat_vs_k", lin), ("mean_vs_k", pw_mean), ("m_hat_vs_kappa", pw_mode)):
        a, b = fit.coefficients
        rows.append(
            {
                "fit": name,
                "model": fit.model.value,
                "a": f"{a:.6g}",
                "b": f"{b:.6g}",
                "residual": f"{fit.residual:.3g}",
                "n_points": fit.n_points,
                "domain": f"{fit.domain[0]:g}..{fit.domain[1]:g}",
            }
        )
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-min", type=int, default=Config.k_min)
    ap.add_argument("--k-max", type=int, default=Config.k_max)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--out", default=None)
    a = ap.parse_args(argv)
    cfg = Config(a.k_min, a.k_max, a.points, a.out)
    write_csv(run(cfg), cfg.out)


if __name__ == "__main__":
    main()
