"""Special functions used throughout the package.

Gamma and log-gamma use a Lanczos approximation (g=7, 9 terms). The Bessel
function of the first kind is evaluated by its power series for small
arguments and by the Hankel asymptotic expansion plus forward recurrence in
order for large arguments. Everything accepts scalars or numpy arrays and
returns a Python float for scalar input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SphereMeasure",
    "gamma",
    "log_gamma",
    "bessel_j",
    "bessel_small_arg",
    "bessel_lambda",
    "bessel_lambda_complement",
    "sphere_measure",
    "log_ball_volume",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG2 = math.log(2.0)

# Power series is used for x <= max(_SERIES_MAX, v). Beyond 14 the series loses
# digits to cancellation; below it the Hankel expansion is not yet 1e-10 accurate.
_SERIES_MAX = 14.0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _lanczos_sum(z):
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (z + i)
    return acc


def log_gamma(x):
    """Natural log of the gamma function for x > 0."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("log_gamma is only defined here for x > 0")
    out = np.empty_like(x)
    lo = x < 0.5
    hi = ~lo
    if np.any(hi):
        z = x[hi] - 1.0
        t = z + _LANCZOS_G + 0.5
        out[hi] = _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(_lanczos_sum(z))
    if np.any(lo):
        # Gamma(x) = Gamma(x + 1) / x
        xl = x[lo]
        out[lo] = log_gamma(xl + 1.0) - np.log(xl)
    return _out(out, scalar)


def gamma(x):
    """Gamma function for x > 0.

    Raises ValueError for x <= 0 and OverflowError past x ~ 171.6.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("gamma is only defined here for x > 0")
    if np.any(x > 171.62):
        raise OverflowError("gamma(x) overflows a double for x > 171.62")
    out = np.empty_like(x)
    lo = x < 0.5
    hi = ~lo
    if np.any(hi):
        z = x[hi] - 1.0
        t = z + _LANCZOS_G + 0.5
        half = t ** (0.5 * (z + 0.5))
        out[hi] = math.sqrt(2.0 * math.pi) * half * (half * np.exp(-t)) * _lanczos_sum(z)
    if np.any(lo):
        xl = x[lo]
        out[lo] = gamma(xl + 1.0) / xl
    return _out(out, scalar)


def bessel_small_arg(v, x):
    """Leading small-argument term (x/2)^v / Gamma(1+v) of J_v(x)."""
    if v < 0:
        raise ValueError("order must be >= 0")
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("argument must be >= 0")
    if v == 0:
        return _out(np.ones_like(x), scalar)
    with np.errstate(divide="ignore"):
        logt = v * (np.log(x) - _LOG2) - log_gamma(1.0 + v)
    return _out(np.exp(logt), scalar)


def _series(v, x):
    # sum_k (-1)^k (x/2)^(2k+v) / (k! Gamma(k+v+1))
    h = 0.5 * x
    with np.errstate(divide="ignore"):
        if v == 0:
            term = np.ones_like(x)
        else:
            term = np.exp(v * (np.log(x) - _LOG2) - log_gamma(v + 1.0))
    total = term.copy()
    h2 = h * h
    kmin = float(np.max(h, initial=0.0))
    for k in range(1, 600):
        term = -term * h2 / (k * (k + v))
        total += term
        if k > kmin and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _hankel_asymptotic(mu, x):
    # J_mu(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w), w = x - mu pi/2 - pi/4
    four_mu2 = 4.0 * mu * mu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = 1.0
    prev = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    inv = 1.0 / x
    xk = np.ones_like(x)
    for k in range(1, 80):
        a = a * (four_mu2 - (2 * k - 1) ** 2) / (8.0 * k)
        xk = xk * inv
        term = a * xk
        growing = np.abs(term) > np.abs(prev)
        active &= ~growing
        if not np.any(active):
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        add = np.where(active, sign * term, 0.0)
        if k % 2 == 0:
            p += add
        else:
            q += add
        prev = np.where(active, term, prev)
        if a == 0.0:
            break
    w = x - (0.5 * mu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(w) - q * np.sin(w))


def _large(v, x):
    n = int(math.floor(v))
    mu = v - n
    j0 = _hankel_asymptotic(mu, x)
    if n == 0:
        return j0
    j1 = _hankel_asymptotic(mu + 1.0, x)
    # forward recurrence is stable while order < x, which holds since x > v
    for m in range(1, n):
        j0, j1 = j1, 2.0 * (mu + m) / x * j1 - j0
    return j1


def bessel_j(v, x):
    """Bessel function of the first kind J_v(x) for real v >= 0, x >= 0."""
    v = float(v)
    if not v >= 0:
        raise ValueError("order must be >= 0")
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)):
        raise ValueError("argument must be finite")
    if np.any(x < 0):
        raise ValueError("argument must be >= 0")
    out = np.empty_like(x)
    small = x <= max(_SERIES_MAX, v)
    if np.any(small):
        out[small] = _series(v, x[small])
    big = ~small
    if np.any(big):
        out[big] = _large(v, x[big])
    return _out(out, scalar)


def bessel_lambda(v, x):
    """Normalised Bessel function Gamma(v+1) (2/x)^v J_v(x), equal to 1 at x=0."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    out = 1.0 - np.asarray(bessel_lambda_complement(v, x))
    return _out(out, scalar)


def bessel_lambda_complement(v, x):
    """1 - Gamma(v+1) (2/x)^v J_v(x), evaluated without cancellation near x=0."""
    v = float(v)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("argument must be >= 0")
    out = np.empty_like(x)
    small = x <= 4.0
    if np.any(small):
        h2 = 0.25 * x[small] ** 2
        term = np.ones_like(h2)
        total = np.zeros_like(h2)
        for k in range(1, 60):
            term = -term * h2 / (k * (k + v))
            total -= term
            if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
                break
        out[small] = total
    big = ~small
    if np.any(big):
        xb = x[big]
        lam = np.exp(log_gamma(v + 1.0) + v * np.log(2.0 / xb)) * bessel_j(v, xb)
        out[big] = 1.0 - lam
    return _out(out, scalar)


@dataclass(frozen=True)
class SphereMeasure:
    """Surface measure of S^{d-1} and volume of the unit d-ball."""

    dim: int
    surface: float
    ball_volume: float
    log_surface: float
    log_ball_volume: float


def log_ball_volume(d):
    """log of pi^{d/2} / Gamma(1 + d/2); d may be real-valued."""
    return 0.5 * d * math.log(math.pi) - log_gamma(1.0 + 0.5 * d)


def sphere_measure(d: int) -> SphereMeasure:
    if int(d) != d or d < 1:
        raise ValueError("dimension must be a positive integer")
    d = int(d)
    log_surface = math.log(2.0) + 0.5 * d * math.log(math.pi) - log_gamma(0.5 * d)
    log_vol = log_surface - math.log(d)
    if d > 300:
        surface, vol = math.exp(log_surface), math.exp(log_vol)
    else:
        surface = 2.0 * math.pi ** (0.5 * d) / gamma(0.5 * d)
        vol = math.pi ** (0.5 * d) / gamma(1.0 + 0.5 * d)
    return SphereMeasure(d, surface, vol, log_surface, log_vol)
