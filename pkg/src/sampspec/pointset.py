"""Point sets on the toroidal unit cube and the generators that produce them.

Random numbers come from numpy's Philox-4x64 counter-based generator keyed by
a 64-bit unsigned seed, so identical seeds give bit-identical point sets on any
platform running the same numpy bit generator.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from os import PathLike

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "PointSet",
    "rng_from_seed",
    "toroidal_distance",
    "toroidal_delta",
    "generate_random",
    "generate_poisson_disk",
    "read_points_csv",
    "write_points_csv",
]

_MAX_SEED = 2**64 - 1


def rng_from_seed(seed) -> np.random.Generator:
    """Return a Philox-backed generator; Generators are passed through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    seed = int(seed)
    if not 0 <= seed <= _MAX_SEED:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True, eq=False)
class PointSet:
    """N points in [0, 1)^d. The coordinate array is stored read-only."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("points must be an (N, d) array with N >= 1")
        if np.any(~np.isfinite(pts)) or np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise ValueError("every coordinate must lie in [0, 1)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    __hash__ = None


def toroidal_delta(a, b):
    """Per-coordinate wrapped separation min(|a-b|, 1-|a-b|), broadcasting."""
    diff = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    return np.minimum(diff, 1.0 - diff)


def toroidal_distance(a, b) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum(toroidal_delta(a, b) ** 2)))


def generate_random(d: int, n: int, rng) -> PointSet:
    """N i.i.d. uniform points on the torus."""
    if d < 1 or n < 1:
        raise ValueError("d and n must be >= 1")
    gen = rng_from_seed(rng)
    return PointSet(gen.random((n, d)))


def generate_poisson_disk(d: int, r_min: float, rng, max_attempts: int | None = None,
                          batch: int = 1024) -> PointSet:
    """Dart throwing on the torus.

    Uniform proposals are accepted when their toroidal distance to every
    accepted point is at least ``r_min``. Generation stops once
    ``max_attempts`` consecutive proposals have been rejected; the default is
    ``10**4`` times the number of points accepted so far. Proposals are drawn in
    batches whose size depends only on the generator state, so the output is a
    deterministic function of the seed and arguments.
    """
    if d not in (1, 2, 3):
        raise ValueError("dart throwing is supported for d in {1, 2, 3}")
    if not 0.0 < r_min < 0.5:
        raise ValueError("r_min must lie in (0, 0.5)")
    if max_attempts is not None and max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    gen = rng_from_seed(rng)
    pts = np.empty((0, d))
    run = 0  # consecutive rejections so far

    def limit(n):
        return max_attempts if max_attempts is not None else 10_000 * max(n, 1)

    while True:
        size = int(min(65_536, max(batch, run // 4)))
        cand = gen.random((size, d))
        if len(pts):
            nearest, _ = cKDTree(pts, boxsize=1.0).query(cand, k=1, distance_upper_bound=r_min)
            idx = np.flatnonzero(nearest >= r_min)
        else:
            idx = np.arange(size)
        # clashes among this batch's survivors, resolved greedily in draw order
        earlier = [[] for _ in idx]
        if len(idx) > 1:
            pairs = cKDTree(cand[idx], boxsize=1.0).query_pairs(r_min, output_type="ndarray")
            # pairs at exactly r_min also count as clashes (a null event)
            for a, b in np.sort(pairs, axis=1).tolist():
                earlier[b].append(a)
        taken = [False] * len(idx)
        chosen = []
        last = -1
        stopped = False
        for j, i in enumerate(idx.tolist()):
            if any(taken[a] for a in earlier[j]):
                continue
            if run + (i - last - 1) >= limit(len(pts) + len(chosen)):
                stopped = True
                break
            taken[j] = True
            chosen.append(i)
            run = 0
            last = i
        if chosen:
            pts = np.concatenate([pts, cand[chosen]])
        if stopped:
            break
        run += size - last - 1
        if run >= limit(len(pts)):
            break
    if len(pts) == 0:
        raise RuntimeError("dart throwing accepted no points")
    return PointSet(pts)


def write_points_csv(ps: PointSet, dest: str | PathLike | io.TextIOBase | None = None) -> str:
    """Headerless CSV, one point per row, shortest round-trip float repr."""
    text = "".join(",".join(repr(float(c)) for c in row) + "\n" for row in ps.points)
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return text


def read_points_csv(src) -> PointSet:
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(src) as fh:
            text = fh.read()
    rows = [line.split(",") for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("point-set CSV is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged point-set CSV")
    return PointSet(np.array(rows, dtype=float))
