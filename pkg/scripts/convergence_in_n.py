"""Bounds versus N for random, blue-noise and Poisson disk sampling in 2D.

Writes one ``N,value`` CSV per series and a JSON file with the fitted slopes.
"""
import argparse
import json
from pathlib import Path

import numpy as np

from sampspec.bounds import LossSpectrumModel
from sampspec.experiments import convergence_sweep

SERIES = [
    ("random", "best"),
    ("random", "worst"),
    ("bluenoise", "best"),
    ("bluenoise", "worst"),
    ("pds", "best"),
    ("pds", "worst"),
    ("pds_appendix", "best"),
]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results/convergence"))
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--cl", type=float, default=1e8)
    parser.add_argument("--clprime", type=float, default=1.1)
    parser.add_argument("--rho0", type=float, default=1e-4)
    parser.add_argument("--nmin", type=float, default=10)
    parser.add_argument("--nmax", type=float, default=1e5)
    parser.add_argument("--points", type=int, default=9)
    args = parser.parse_args(argv)

    loss = LossSpectrumModel.worst(args.cl, args.rho0, args.clprime)
    n_list = np.unique(np.round(np.geomspace(args.nmin, args.nmax, args.points)).astype(np.int64))
    args.out.mkdir(parents=True, exist_ok=True)
    summary = {}
    for family, case in SERIES:
        res = convergence_sweep(family, loss, args.d, n_list, case)
        (args.out / f"{family}_{case}.csv").write_text(res.to_csv())
        summary[f"{family}_{case}"] = res.summary()
        slope = "degenerate" if res.degenerate else f"{res.slope:+.4f}"
        print(f"{family:>13} {case:<5} slope {slope}")
    (args.out / "slopes.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
