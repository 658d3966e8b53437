"""Radially averaged power spectrum and pair correlation estimates of point sets."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .pointset import PointSet
from .specialfn import sphere_measure

__all__ = [
    "RadialSpectrum",
    "PairCorrelation",
    "structure_factor",
    "lattice_psd",
    "estimate_psd",
    "estimate_pcf",
    "default_bandwidth",
]


def _check_grid(grid, name, positive):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError(f"{name} must be a non-empty 1-d array")
    if np.any(np.diff(grid) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    if positive and grid[0] <= 0:
        raise ValueError(f"{name} must exclude zero")
    return grid


def _table_csv(header, xs, ys):
    lines = [header]
    lines += [f"{float(x)!r},{float(y)!r}" for x, y in zip(xs, ys)]
    return "\n".join(lines) + "\n"


def _parse_table(text, header):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].replace(" ", "") != header:
        raise ValueError(f"expected CSV header {header!r}")
    data = np.array([ln.split(",") for ln in lines[1:]], dtype=float).reshape(-1, 2)
    return data[:, 0], data[:, 1]


@dataclass(frozen=True, eq=False)
class RadialSpectrum:
    """Radially averaged PSD P(rho) on a grid of frequencies excluding DC."""

    rho_grid: np.ndarray
    values: np.ndarray
    n_samples: int | None = None
    dim: int | None = None

    def __post_init__(self):
        grid = _check_grid(self.rho_grid, "rho_grid", positive=True)
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != grid.shape:
            raise ValueError("values must match rho_grid")
        object.__setattr__(self, "rho_grid", grid)
        object.__setattr__(self, "values", vals)

    def to_csv(self) -> str:
        return _table_csv("rho,value", self.rho_grid, self.values)

    @classmethod
    def from_csv(cls, text, n_samples=None, dim=None):
        rho, vals = _parse_table(text, "rho,value")
        return cls(rho, vals, n_samples, dim)


@dataclass(frozen=True, eq=False)
class PairCorrelation:
    """Pair correlation G(r) on a radius grid; intensity is N on the unit torus."""

    r_grid: np.ndarray
    values: np.ndarray
    n_samples: int | None = None
    dim: int | None = None

    def __post_init__(self):
        grid = _check_grid(self.r_grid, "r_grid", positive=True)
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != grid.shape:
            raise ValueError("values must match r_grid")
        object.__setattr__(self, "r_grid", grid)
        object.__setattr__(self, "values", vals)

    @property
    def intensity(self):
        return self.n_samples

    def to_csv(self) -> str:
        return _table_csv("r,value", self.r_grid, self.values)

    @classmethod
    def from_csv(cls, text, n_samples=None, dim=None):
        r, vals = _parse_table(text, "r,value")
        return cls(r, vals, n_samples, dim)


def structure_factor(points, freqs):
    """S(k) = sum_j exp(-2 pi i k.x_j) for each integer frequency row of ``freqs``."""
    points = np.asarray(points, dtype=float)
    freqs = np.atleast_2d(np.asarray(freqs, dtype=float))
    phase = -2.0 * math.pi * (freqs @ points.T)
    return np.exp(1j * phase).sum(axis=1)


def lattice_psd(ps: PointSet, k_max: int):
    """P(k) = |S(k)|^2 / N on the full box of integer frequencies |k_i| <= k_max.

    Returns ``(axis, P)`` where ``axis`` is ``arange(-k_max, k_max+1)`` and ``P``
    has one axis of that length per dimension.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    n, d = ps.points.shape
    axis = np.arange(-k_max, k_max + 1)
    # separable exponentials: S(k) = sum_j prod_a exp(-2 pi i k_a x_ja)
    ex = [np.exp(-2j * math.pi * np.outer(ps.points[:, a], axis)) for a in range(d)]
    if d == 1:
        s = ex[0].sum(axis=0)
    elif d == 2:
        s = ex[0].T @ ex[1]
    else:
        letters = "abcdefghik"[:d]
        expr = ",".join("j" + c for c in letters) + "->" + letters
        s = np.einsum(expr, *ex, optimize=True)
    return axis, np.abs(s) ** 2 / n


def estimate_psd(ps: PointSet, k_max: int) -> RadialSpectrum:
    """Radially averaged periodogram on the integer lattice, unit bins centred on 1..k_max."""
    if len(ps) < 1:
        raise ValueError("empty point set")
    axis, p = lattice_psd(ps, k_max)
    grids = np.meshgrid(*([axis] * ps.dim), indexing="ij")
    radius = np.sqrt(sum(g.astype(float) ** 2 for g in grids))
    bins = np.rint(radius).astype(np.int64).ravel()
    flat = p.ravel()
    keep = (bins >= 1) & (bins <= k_max)
    sums = np.bincount(bins[keep], weights=flat[keep], minlength=k_max + 1)[1:]
    counts = np.bincount(bins[keep], minlength=k_max + 1)[1:]
    rho = np.arange(1, k_max + 1, dtype=float)
    return RadialSpectrum(rho, sums / counts, len(ps), ps.dim)


def default_bandwidth(n: int, d: int) -> float:
    return 0.5 * n ** (-1.0 / d)


def estimate_pcf(ps: PointSet, r_grid=None, bandwidth: float | None = None) -> PairCorrelation:
    """Gaussian-kernel pair correlation estimate on the torus.

    Ordered pair distances are smoothed with a Gaussian of width ``bandwidth``
    (reflected at r = 0) and divided by N(N-1) times the shell measure
    |S^{d-1}| r^{d-1}, so a binomial (fixed-N Poisson) process has E[G] = 1.
    """
    n, d = ps.points.shape
    if n < 2:
        raise ValueError("pair correlation needs at least two points")
    if r_grid is None:
        r_grid = np.linspace(0.5 / 512, 0.5, 512)
    r_grid = _check_grid(r_grid, "r_grid", positive=True)
    if r_grid[-1] > 0.5:
        raise ValueError("r_grid must lie within (0, 0.5]")
    h = default_bandwidth(n, d) if bandwidth is None else float(bandwidth)
    if not h > 0:
        raise ValueError("bandwidth must be positive")
    reach = min(r_grid[-1] + 8.0 * h, math.sqrt(d) / 2.0)
    tree = cKDTree(ps.points, boxsize=1.0)
    pairs = tree.query_pairs(reach, output_type="ndarray")
    if len(pairs):
        delta = ps.points[pairs[:, 0]] - ps.points[pairs[:, 1]]
        delta = np.abs(delta)
        delta = np.minimum(delta, 1.0 - delta)
        dist = np.sort(np.sqrt(np.sum(delta * delta, axis=1)))
    else:
        dist = np.empty(0)
    norm = 1.0 / (h * math.sqrt(2.0 * math.pi))
    dens = np.empty_like(r_grid)
    for i, r in enumerate(r_grid):
        lo, hi = np.searchsorted(dist, [r - 8.0 * h, r + 8.0 * h])
        t = dist[lo:hi]
        kern = np.exp(-0.5 * ((r - t) / h) ** 2)
        lo0 = np.searchsorted(dist, 8.0 * h - r, side="right") if r < 8.0 * h else 0
        refl = np.exp(-0.5 * ((r + dist[:lo0]) / h) ** 2)
        # each unordered pair contributes twice to the ordered-pair density
        dens[i] = 2.0 * norm * (kern.sum() + refl.sum())
    shell = sphere_measure(d).surface * r_grid ** (d - 1)
    return PairCorrelation(r_grid, dens / (n * (n - 1) * shell), n, d)
