"""Command-line interface: ``sampspec <subcommand> [flags]``.

Floats are written with Python's shortest round-trip repr, so identical flags
give byte-identical output. Exit status is 0 on success, 2 on invalid input
and 1 when a numerical method fails.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds, experiments, profiles, transforms
from ._quadrature import QuadratureError
from .pointset import generate_poisson_disk, generate_random, read_points_csv, write_points_csv
from .profiles import SpectralProfile
from .spectral_estimation import PairCorrelation, RadialSpectrum, estimate_pcf, estimate_psd

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0 or v != v or v == float("inf"):
        raise argparse.ArgumentTypeError("must be a finite positive number")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v <= 2**64 - 1:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _int_vector(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from exc


def _emit(args, text):
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, sort_keys=True) + "\n"


def _table_json(x_name, xs, ys, extra=None):
    obj = {x_name: [float(x) for x in xs], "value": [float(y) for y in ys]}
    if extra:
        obj.update(extra)
    return _dump(obj)


def _read_text(path):
    with open(path) as fh:
        return fh.read()


def _read_table(path, n, d):
    text = _read_text(path)
    head = text.lstrip().split("\n", 1)[0].replace(" ", "")
    if head == "rho,value":
        return RadialSpectrum.from_csv(text, n, d)
    if head == "r,value":
        return PairCorrelation.from_csv(text, n, d)
    raise UsageError(f"{path}: expected a 'rho,value' or 'r,value' table")


def _profile(args):
    if args.sampler == "random":
        return SpectralProfile.flat(args.n, args.d)
    if args.sampler == "bluenoise":
        if args.rhoz is None:
            return SpectralProfile.optimal_step_psd(args.n, args.d)
        return SpectralProfile.step_psd(args.rhoz, args.n, args.d)
    if args.rmin is None:
        return SpectralProfile.optimal_step_pcf(args.n, args.d)
    return SpectralProfile.step_pcf(args.rmin, args.n, args.d)


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def cmd_generate(args):
    _need(args, "d")
    if args.sampler == "random":
        _need(args, "n")
        ps = generate_random(args.d, args.n, args.seed)
    else:
        _need(args, "rmin")
        ps = generate_poisson_disk(args.d, args.rmin, args.seed, args.max_attempts)
    if args.format == "json":
        return _dump({"N": len(ps), "d": ps.dim, "points": ps.points.tolist()})
    return write_points_csv(ps)


def cmd_psd(args):
    ps = read_points_csv(args.input)
    spec = estimate_psd(ps, args.kmax)
    if args.format == "json":
        return _table_json("rho", spec.rho_grid, spec.values, {"N": len(ps), "d": ps.dim})
    return spec.to_csv()


def cmd_pcf(args):
    ps = read_points_csv(args.input)
    grid = np.linspace(args.rmax / args.nr, args.rmax, args.nr)
    pcf = estimate_pcf(ps, grid, args.bandwidth)
    if args.format == "json":
        return _table_json("r", pcf.r_grid, pcf.values, {"N": len(ps), "d": ps.dim})
    return pcf.to_csv()


def cmd_transform(args):
    _need(args, "n", "d")
    if args.input:
        src = _read_table(args.input, args.n, args.d)
    else:
        if args.sampler is None:
            raise UsageError("transform needs --input or --sampler")
        src = _profile(args)
    if isinstance(src, RadialSpectrum) or (isinstance(src, SpectralProfile) and src.kind == profiles.STEP_PSD):
        out = transforms.psd_to_pcf(src)
        grid, name = out.r_grid, "r"
    elif isinstance(src, PairCorrelation) or src.kind == profiles.STEP_PCF:
        out = transforms.pcf_to_psd(src)
        grid, name = out.rho_grid, "rho"
    else:
        out = transforms.psd_to_pcf(src)
        grid, name = out.r_grid, "r"
    if args.format == "json":
        return _table_json(name, grid, out.values, {"N": args.n, "d": args.d})
    return out.to_csv()


def cmd_realizable(args):
    if args.input:
        _need(args, "n", "d")
        src = _read_table(args.input, args.n, args.d)
    else:
        _need(args, "sampler", "n", "d")
        src = _profile(args)
    rep = transforms.check_realizability(src, tol=args.tol, approximate=args.approximate)
    record = {
        "realizable": rep.realizable,
        "psd_nonneg": rep.psd_nonneg,
        "pcf_nonneg": rep.pcf_nonneg,
        "min_psd": rep.min_psd,
        "min_pcf": rep.min_pcf,
        "argmin_psd": rep.argmin_psd,
        "argmin_pcf": rep.argmin_pcf,
        "tol": rep.tol,
    }
    if args.format == "json":
        return _dump({k: (None if isinstance(v, float) and v != v else v) for k, v in record.items()})
    return "key,value\n" + "".join(f"{k},{v!r}\n" for k, v in record.items())


def cmd_optimal(args):
    if args.sampler == "bluenoise":
        if args.rhoz is not None:
            name, value = "N", profiles.min_samples_for_zero_region(args.rhoz, args.d)
        else:
            _need(args, "n")
            name, value = "rho_z", profiles.max_zero_region(args.n, args.d)
    elif args.sampler == "pds":
        if args.rmin is not None:
            name, value = "N", profiles.min_samples_for_rmin(args.rmin, args.d)
        else:
            _need(args, "n")
            name, value = "r_min", profiles.max_rmin(args.n, args.d)
    else:
        raise UsageError("optimal supports --sampler bluenoise or pds")
    if args.format == "json":
        return _dump({"quantity": name, "value": value, "d": args.d})
    return f"{value!r}\n"


def _loss(args):
    if args.case == "worst":
        _need(args, "clprime")
        return bounds.LossSpectrumModel.worst(args.cl, args.rho0, args.clprime)
    return bounds.LossSpectrumModel.best(args.cl, args.rho0)


def cmd_bound(args):
    _need(args, "n")
    loss = _loss(args)
    if args.sampler == "random":
        res = bounds.bound_random(loss, args.n, args.d)
    elif args.sampler == "bluenoise":
        res = bounds.bound_bluenoise(loss, args.n, args.d)
    else:
        res = bounds.bound_pds(loss, args.n, args.d, method=args.method, convention=args.convention)
    if args.format == "json":
        return _dump(res.to_record(args.sampler, args.case, args.n, args.d, loss))
    return f"{res.value!r}\n"


def cmd_sweep_n(args):
    loss = _loss(args)
    n_list = np.unique(np.round(np.geomspace(args.nmin, args.nmax, args.points)).astype(np.int64))
    family = "pds_appendix" if (args.sampler == "pds" and args.method == "appendix_closed_form") else args.sampler
    res = experiments.convergence_sweep(family, loss, args.d, n_list, args.case, args.convention)
    if args.format == "json":
        summary = res.summary()
        summary.update({"N": [int(x) for x in res.axis], "value": [float(v) for v in res.values]})
        return _dump(summary)
    return res.to_csv()


def cmd_sweep_d(args):
    params = {}
    if args.metric in ("rho_z_star", "r_min_star", "relative_rho_z", "relative_rmin"):
        _need(args, "n")
        params["N"] = args.n
    elif args.metric == "n_min_for_rho_z":
        _need(args, "rhoz")
        params["rho_z"] = args.rhoz
    else:
        _need(args, "rmin")
        params["r_min"] = args.rmin
    res = experiments.dimension_sweep(args.metric, params, np.arange(args.dmin, args.dmax + 1))
    if args.format == "json":
        summary = res.summary()
        summary.update({"d": [int(x) for x in res.axis], "log_value": [float(v) for v in res.log_values]})
        return _dump(summary)
    return res.to_csv()


def cmd_validate(args):
    freqs = args.freq or [(1,) + (0,) * (args.d - 1)]
    if any(len(k) != args.d for k in freqs):
        raise UsageError("--freq vectors must have --d components")
    loss = experiments.TestLoss.truncated_fourier(args.d, [(k, 1.0, 0.0) for k in freqs])
    if args.sampler == "random":
        _need(args, "n")
        sampler = experiments.Sampler("random", args.d)
    else:
        _need(args, "rmin")
        sampler = experiments.Sampler("pds", args.d, args.rmin, args.max_attempts)
    rep = experiments.validate_spectral_identity(loss, sampler, args.n or 0, args.realizations, args.seed)
    record = dict(sorted(rep.__dict__.items()))
    if args.format == "json":
        return _dump(record)
    return "key,value\n" + "".join(f"{k},{v!r}\n" for k, v in record.items())


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="sampspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    def sizes(p, d_required=True):
        p.add_argument("--n", type=_positive_int)
        p.add_argument("--d", type=_positive_int, required=d_required)

    def sampler(p, choices=("random", "bluenoise", "pds"), required=True):
        p.add_argument("--sampler", choices=choices, required=required)
        p.add_argument("--rhoz", type=_positive_float, help="blue-noise zero-region radius")
        p.add_argument("--rmin", type=_positive_float, help="Poisson disk radius")

    def loss(p):
        p.add_argument("--case", choices=("best", "worst"), default="best")
        p.add_argument("--cl", type=_positive_float, required=True)
        p.add_argument("--clprime", type=_positive_float)
        p.add_argument("--rho0", type=_positive_float, required=True)
        p.add_argument("--method", choices=("quadrature", "appendix_closed_form"), default="quadrature")
        p.add_argument("--convention", choices=profiles.CONVENTIONS, default="cyclic")

    p = add("generate", cmd_generate, "generate a point set")
    sizes(p)
    p.add_argument("--sampler", choices=("random", "pds"), required=True)
    p.add_argument("--rmin", type=_positive_float)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-attempts", type=_positive_int)

    p = add("psd", cmd_psd, "radially averaged PSD of a point-set CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--kmax", type=_positive_int, default=64)

    p = add("pcf", cmd_pcf, "pair correlation of a point-set CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--bandwidth", type=_positive_float)
    p.add_argument("--nr", type=_positive_int, default=512)
    p.add_argument("--rmax", type=_positive_float, default=0.5)

    p = add("transform", cmd_transform, "convert a PSD table to a PCF or back")
    sizes(p)
    sampler(p, required=False)
    p.add_argument("--input", help="table with header rho,value or r,value")

    p = add("realizable", cmd_realizable, "check non-negativity of PSD and PCF")
    sizes(p)
    sampler(p, required=False)
    p.add_argument("--input")
    p.add_argument("--tol", type=_positive_float)
    p.add_argument("--approximate", action="store_true",
                   help="use the small-argument Bessel term in the blue-noise PCF")

    p = add("optimal", cmd_optimal, "largest zero region / r_min, or the N needed for one")
    sizes(p)
    sampler(p, choices=("bluenoise", "pds"))

    p = add("bound", cmd_bound, "evaluate one generalization-error bound")
    sizes(p)
    p.add_argument("--sampler", choices=("random", "bluenoise", "pds"), required=True)
    loss(p)

    p = add("sweep-n", cmd_sweep_n, "bounds over N with a log-log slope")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--sampler", choices=("random", "bluenoise", "pds"), required=True)
    loss(p)
    p.add_argument("--nmin", type=_positive_int, default=10)
    p.add_argument("--nmax", type=_positive_int, default=100_000)
    p.add_argument("--points", type=_positive_int, default=9)

    p = add("sweep-d", cmd_sweep_d, "dimension metric over d")
    p.add_argument("--metric", choices=experiments.METRICS, required=True)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--rhoz", type=_positive_float)
    p.add_argument("--rmin", type=_positive_float)
    p.add_argument("--dmin", type=_positive_int, default=1)
    p.add_argument("--dmax", type=_positive_int, default=200)

    p = add("validate", cmd_validate, "check the spectral variance identity by Monte Carlo")
    sizes(p)
    p.add_argument("--sampler", choices=("random", "pds"), required=True)
    p.add_argument("--rmin", type=_positive_float)
    p.add_argument("--max-attempts", type=_positive_int)
    p.add_argument("--freq", type=_int_vector, action="append",
                   help="cosine frequency vector, e.g. 1,0 (repeatable)")
    p.add_argument("--realizations", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        text = args.func(args)
    except (QuadratureError, bounds.DivergentIntegralError, OverflowError, FloatingPointError) as exc:
        print(f"sampspec {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"sampspec {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(args, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
