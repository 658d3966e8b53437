"""Optimal zero region, r_min and required sample counts as the dimension grows."""
import argparse
import json
import math
from pathlib import Path

import numpy as np

from sampspec.experiments import dimension_sweep


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("results/dimension"))
    parser.add_argument("--n", type=int, default=10)
    parser.add_argument("--rhoz", type=float, default=5.0)
    parser.add_argument("--rmin", type=float, default=0.1)
    parser.add_argument("--dmax", type=int, default=200)
    args = parser.parse_args(argv)

    d_list = np.arange(1, args.dmax + 1)
    runs = {
        "rho_z_star": {"N": args.n},
        "r_min_star": {"N": args.n},
        "relative_rho_z": {"N": args.n},
        "relative_rmin": {"N": args.n},
        "n_min_for_rho_z": {"rho_z": args.rhoz},
        "n_min_for_rmin": {"r_min": args.rmin},
    }
    args.out.mkdir(parents=True, exist_ok=True)
    summary = {}
    for metric, params in runs.items():
        res = dimension_sweep(metric, params, d_list)
        (args.out / f"{metric}.csv").write_text(res.to_csv())
        summary[metric] = res.summary()
        print(f"{metric:>16} at d={args.dmax}: {res.values[-1]:.6g}  {'; '.join(res.regime_notes)}")
    limit = {m: dimension_sweep(m, {"N": args.n}, [10**4]).values[0] for m in ("relative_rho_z", "relative_rmin")}
    summary["limit_d_10000"] = dict(limit, target=1 / math.sqrt(2 * math.pi * math.e))
    print("d = 10^4:", ", ".join(f"{k} {v:.6f}" for k, v in summary["limit_d_10000"].items()))
    (args.out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
