"""Radial Fourier (Hankel) duality between PSD and PCF, and realizability checks.

    G(r)   = 1 + (1/N) r^{1-d/2} H_{d/2-1}[rho^{d/2-1} (P(rho) - 1)](r)
    P(rho) = 1 + N rho^{1-d/2} H_{d/2-1}[r^{d/2-1} (G(r) - 1)](rho)

with H_v[f](r) = 2 pi int_0^inf x f(x) J_v(2 pi r x) dx.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import profiles as prof
from ._quadrature import integrate, panel_edges
from .profiles import SpectralProfile
from .specialfn import bessel_j, log_gamma
from .spectral_estimation import PairCorrelation, RadialSpectrum

__all__ = [
    "RealizabilityReport",
    "hankel",
    "psd_to_pcf",
    "pcf_to_psd",
    "check_realizability",
    "default_r_grid",
    "default_rho_grid",
]

GRID_NODES = 512
# relative accuracy of bessel_j; finer quadrature cannot resolve below it
_KERNEL_NOISE = 1e-10


def _kernel(v, z):
    # J_{-1/2} appears for d = 1 and is outside bessel_j's domain
    if v == -0.5:
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.sqrt(2.0 / (math.pi * z)) * np.cos(z)
    return bessel_j(v, z)


def _lambda_envelope(v):
    # |Gamma(v+1) (2/x)^v J_v(x)| <= c x^{-v-1/2} for x beyond the first zero
    return math.exp(log_gamma(v + 1.0) + v * math.log(2.0)) * math.sqrt(2.0 / math.pi)


def hankel(order, f, r, x_max=None, breakpoints=(), tail=None, rtol=1e-10):
    """2 pi int_0^{x_max} x f(x) J_order(2 pi r x) dx.

    ``f`` is a vectorised callable (then ``x_max`` is required) or a tabulated
    pair ``(x, y)`` that is interpolated linearly. With ``tail=True`` (the
    default for tabulated input) an analytic tail is added that lets f fall
    linearly from f(x_max) to zero over one oscillation period 1/r.
    """
    if not r > 0:
        raise ValueError("r must be > 0")
    if callable(f):
        if x_max is None:
            raise ValueError("x_max is required for callable f")
        func = f
        nodes = ()
        tail = False if tail is None else tail
    else:
        xs, ys = (np.asarray(a, dtype=float) for a in f)
        if np.any(~np.isfinite(ys)) or np.any(~np.isfinite(xs)):
            raise ValueError("tabulated f contains non-finite samples")
        x_max = float(xs[-1]) if x_max is None else float(x_max)
        nodes = tuple(xs)

        def func(x):
            return np.interp(x, xs, ys)

        tail = True if tail is None else tail
    w = 2.0 * math.pi * r

    def integrand(x):
        return 2.0 * math.pi * x * func(x) * _kernel(order, w * x)

    width = 0.25 / r
    edges = panel_edges(0.0, x_max, min(width, x_max / 4.0 if x_max > 0 else width),
                        tuple(breakpoints) + nodes)
    if order == -0.5:
        # x J_{-1/2}(x) ~ sqrt(x) at the origin; x = u^2 makes the integrand smooth
        def mapped(u):
            return 2.0 * u * integrand(u * u)

        value, _ = integrate(mapped, np.sqrt(edges), rtol=rtol, noise=_KERNEL_NOISE,
                             abs_rtol=rtol)
    else:
        value, _ = integrate(integrand, edges, rtol=rtol, noise=_KERNEL_NOISE,
                             abs_rtol=rtol)
    if tail:
        f_end = float(func(np.array([x_max]))[0])
        if f_end != 0.0:
            period = 1.0 / r

            def tail_integrand(x):
                ramp = f_end * (1.0 - (x - x_max) / period)
                return 2.0 * math.pi * x * ramp * _kernel(order, w * x)

            t_val, _ = integrate(tail_integrand, panel_edges(x_max, x_max + period, width), rtol=rtol,
                                 noise=_KERNEL_NOISE, abs_rtol=rtol)
            value += t_val
    return value


def default_r_grid(r_max=0.5, n=GRID_NODES):
    return np.linspace(r_max / n, r_max, n)


def default_rho_grid(n_samples, dim, n=GRID_NODES):
    rho_max = 4.0 * prof.max_zero_region(n_samples, dim)
    return np.linspace(rho_max / n, rho_max, n)


def _metadata(obj):
    n, d = obj.n_samples, obj.dim
    if n is None or d is None:
        raise ValueError("missing N or d metadata")
    return int(n), int(d)


def _decay_cutoff(amplitude, v, scale, rel=1e-4):
    # first x where amplitude * Lambda envelope drops under rel * amplitude
    c = _lambda_envelope(v)
    return (c / rel) ** (1.0 / (v + 0.5)) / scale


def _taper(x, x_max):
    # cosine roll-off over the second half of [0, x_max]; a hard cut of a slowly
    # decaying oscillatory integrand leaves O(x_max^-2) ripple near the step edge
    half = 0.5 * x_max
    t = np.clip((x - half) / half, 0.0, 1.0)
    return 0.5 * (1.0 + np.cos(math.pi * t))


def _radial_transform(f, x_max, breakpoints, out_grid, d, tail):
    v = 0.5 * d - 1.0
    out = np.empty(len(out_grid))
    for i, y in enumerate(out_grid):
        out[i] = y ** (1.0 - 0.5 * d) * hankel(v, f, y, x_max, breakpoints, tail=tail)
    return out


def _table_transform(grid, values, out_grid, d):
    # interpolate the deviation from 1 and apply the power x^{d/2-1} exactly,
    # holding the first value down to the origin
    dev = np.asarray(values, dtype=float) - 1.0
    if np.any(~np.isfinite(dev)):
        raise ValueError("table contains non-finite values")
    e = 0.5 * d - 1.0

    def f(x):
        return x ** e * np.interp(x, grid, dev)

    return _radial_transform(f, grid[-1], tuple(grid), out_grid, d, tail=True)


def psd_to_pcf(spec, r_grid=None) -> PairCorrelation:
    """Pair correlation implied by a radial PSD (tabulated or analytic profile)."""
    if isinstance(spec, SpectralProfile):
        n, d = spec.n_samples, spec.dim
    else:
        n, d = _metadata(spec)
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0):
        raise ValueError("r_grid must be positive")
    e = 0.5 * d - 1.0
    if isinstance(spec, SpectralProfile):
        if spec.kind == prof.FLAT:
            return PairCorrelation(r_grid, np.ones_like(r_grid), n, d)
        if spec.kind == prof.STEP_PSD:
            rho_z = spec.param

            def f(x):
                return np.where(x <= rho_z, -(x ** e), 0.0)

            h = _radial_transform(f, rho_z, (), r_grid, d, tail=False)
        else:
            r_min = spec.param
            x_max = _decay_cutoff(1.0, 0.5 * d, 2.0 * math.pi * r_min)

            def f(x):
                return _taper(x, x_max) * x ** e * (prof.pds_psd(x, r_min, n, d) - 1.0)

            h = _radial_transform(f, x_max, (), r_grid, d, tail=False)
    else:
        h = _table_transform(spec.rho_grid, spec.values, r_grid, d)
    return PairCorrelation(r_grid, 1.0 + h / n, n, d)


def pcf_to_psd(pcf, rho_grid=None) -> RadialSpectrum:
    """Radial PSD implied by a pair correlation (tabulated or analytic profile)."""
    if isinstance(pcf, SpectralProfile):
        n, d = pcf.n_samples, pcf.dim
    else:
        n, d = _metadata(pcf)
    rho_grid = default_rho_grid(n, d) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    if np.any(rho_grid <= 0):
        raise ValueError("rho_grid must be positive")
    e = 0.5 * d - 1.0
    if isinstance(pcf, SpectralProfile):
        if pcf.kind == prof.FLAT:
            return RadialSpectrum(rho_grid, np.ones_like(rho_grid), n, d)
        if pcf.kind == prof.STEP_PCF:
            r_min = pcf.param

            def f(x):
                return np.where(x <= r_min, -(x ** e), 0.0)

            h = _radial_transform(f, r_min, (), rho_grid, d, tail=False)
        else:
            rho_z = pcf.param
            x_max = _decay_cutoff(1.0, 0.5 * d, 2.0 * math.pi * rho_z)

            def f(x):
                return _taper(x, x_max) * x ** e * (prof.bluenoise_pcf(rho_z, n, d, x) - 1.0)

            h = _radial_transform(f, x_max, (), rho_grid, d, tail=False)
    else:
        h = _table_transform(pcf.r_grid, pcf.values, rho_grid, d)
    return RadialSpectrum(rho_grid, 1.0 + n * h, n, d)


@dataclass(frozen=True)
class RealizabilityReport:
    psd_nonneg: bool
    pcf_nonneg: bool
    min_psd: float
    min_pcf: float
    argmin_psd: float
    argmin_pcf: float
    tol: float

    @property
    def realizable(self) -> bool:
        return self.psd_nonneg and self.pcf_nonneg


def _scan_grid(scale, extent):
    # dense near the origin (where step profiles attain their minima) and linear beyond
    return np.union1d(np.geomspace(1e-9 * scale, scale, 400), np.linspace(0.0, extent, 8001)[1:])


def check_realizability(obj, tol=None, approximate=False, r_max=10.0) -> RealizabilityReport:
    """Check P >= -tol and G >= -tol, computing whichever side is missing.

    ``tol`` defaults to 1e-9 for analytic profiles and 1e-3 for tabulated
    input. ``approximate`` substitutes the small-argument Bessel term into the
    step blue-noise PCF.
    """
    if isinstance(obj, SpectralProfile):
        tol = 1e-9 if tol is None else tol
        n, d = obj.n_samples, obj.dim
        if obj.kind == prof.FLAT:
            return RealizabilityReport(True, True, 1.0, 1.0, math.nan, math.nan, tol)
        if obj.kind == prof.STEP_PSD:
            r = _scan_grid(1.0 / obj.param, max(r_max, 20.0 / obj.param))
            g = prof.bluenoise_pcf(obj.param, n, d, r, approximate=approximate)
            rho_arg, p_min = 0.5 * obj.param, 0.0
            i = int(np.argmin(g))
            return RealizabilityReport(bool(p_min >= -tol), bool(g[i] >= -tol), p_min, float(g[i]),
                                       rho_arg, float(r[i]), tol)
        rho = _scan_grid(1.0 / obj.param, 40.0 / obj.param)
        p = prof.pds_psd(rho, obj.param, n, d)
        i = int(np.argmin(p))
        return RealizabilityReport(bool(p[i] >= -tol), True, float(p[i]), 0.0,
                                   float(rho[i]), 0.5 * obj.param, tol)
    tol = 1e-3 if tol is None else tol
    if isinstance(obj, RadialSpectrum):
        psd, pcf = obj, psd_to_pcf(obj)
    elif isinstance(obj, PairCorrelation):
        psd, pcf = pcf_to_psd(obj), obj
    else:
        raise TypeError(f"cannot check realizability of {type(obj).__name__}")
    ip, ig = int(np.argmin(psd.values)), int(np.argmin(pcf.values))
    min_p, min_g = float(psd.values[ip]), float(pcf.values[ig])
    return RealizabilityReport(bool(min_p >= -tol), bool(min_g >= -tol), min_p, min_g,
                               float(psd.rho_grid[ip]), float(pcf.r_grid[ig]), tol)
