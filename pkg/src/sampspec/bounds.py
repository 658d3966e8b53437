"""Generalization-error bounds from the radial spectra of sampler and loss.

Everything reduces to

    gen = (|S^{d-1}| / N) int_0^inf rho^{d-1} P_S(rho) P_l(rho) d rho

with the loss spectrum either a best-case plateau (c_l below rho_0, zero
beyond) or a worst-case one (c_l below rho_0, c_l' rho^{-d-1} beyond).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import profiles as prof
from ._quadrature import QuadratureError, integrate, panel_edges
from .profiles import CONVENTIONS, SpectralProfile
from .specialfn import bessel_lambda_complement, log_gamma, sphere_measure
from .spectral_estimation import RadialSpectrum

__all__ = [
    "BEST",
    "WORST",
    "LossSpectrumModel",
    "BoundResult",
    "DivergentIntegralError",
    "QuadratureError",
    "gen_error_radial",
    "bound_random",
    "bound_bluenoise",
    "bound_pds",
    "pds_appendix_closed_form",
]

BEST = "best"
WORST = "worst"
REGIMES = ("zero", "below_cutoff", "above_cutoff", "numeric")
_ENVELOPE_RTOL = 1e-8


class DivergentIntegralError(ValueError):
    """The radial integral does not converge (both spectra have non-decaying tails)."""


@dataclass(frozen=True)
class LossSpectrumModel:
    kind: str
    c_l: float
    rho_0: float
    c_l_prime: float | None = None

    def __post_init__(self):
        if self.kind not in (BEST, WORST):
            raise ValueError(f"kind must be {BEST!r} or {WORST!r}")
        if not (self.c_l > 0 and self.rho_0 > 0):
            raise ValueError("c_l and rho_0 must be > 0")
        if self.kind == WORST and not (self.c_l_prime is not None and self.c_l_prime > 0):
            raise ValueError("worst case needs c_l_prime > 0")

    @classmethod
    def best(cls, c_l, rho_0):
        return cls(BEST, float(c_l), float(rho_0))

    @classmethod
    def worst(cls, c_l, rho_0, c_l_prime):
        return cls(WORST, float(c_l), float(rho_0), float(c_l_prime))

    def evaluate(self, rho, d):
        rho = np.asarray(rho, dtype=float)
        below = np.where(rho < self.rho_0, self.c_l, 0.0)
        if self.kind == BEST:
            return below
        with np.errstate(divide="ignore"):
            tail = self.c_l_prime * rho ** (-d - 1.0)
        return np.where(rho < self.rho_0, below, tail)


@dataclass(frozen=True)
class BoundResult:
    value: float
    regime: str
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if not self.value >= 0:
            raise ValueError("bound value must be >= 0")

    def to_record(self, sampler, case, n, d, loss: LossSpectrumModel) -> dict:
        return {
            "sampler": sampler,
            "case": case,
            "N": n,
            "d": d,
            "c_l": loss.c_l,
            "c_l_prime": loss.c_l_prime,
            "rho_0": loss.rho_0,
            "value": self.value,
            "regime": self.regime,
            "components": dict(self.components),
        }

    def to_json(self, *args) -> str:
        return json.dumps(self.to_record(*args), sort_keys=True)


def _check(n, d):
    if n < 1 or d < 1:
        raise ValueError("N and d must be >= 1")


def _case(loss, case):
    case = loss.kind if case is None else case
    if case not in (BEST, WORST):
        raise ValueError(f"case must be {BEST!r} or {WORST!r}")
    if case == WORST and loss.c_l_prime is None:
        raise ValueError("worst case needs c_l_prime")
    return case


def _random_terms(loss, n, d):
    mu = sphere_measure(d).surface
    best = mu * loss.c_l * loss.rho_0 ** d / (n * d)
    tail = mu * loss.c_l_prime / (n * loss.rho_0) if loss.c_l_prime is not None else 0.0
    return mu, best, tail


def bound_random(loss: LossSpectrumModel, n, d, case=None) -> BoundResult:
    """Flat spectrum: best = mu c_l rho_0^d / (N d); worst adds mu c_l' / (N rho_0)."""
    _check(n, d)
    case = _case(loss, case)
    _, best, tail = _random_terms(loss, n, d)
    if case == BEST:
        return BoundResult(best, "above_cutoff", {"random_baseline": best})
    return BoundResult(best + tail, "above_cutoff", {"random_baseline": best, "tail": tail})


def bound_bluenoise(loss: LossSpectrumModel, n, d, case=None, rho_z=None) -> BoundResult:
    """Step blue noise with zero region rho_z (default: the largest realizable one)."""
    _check(n, d)
    case = _case(loss, case)
    mu, random_best, _ = _random_terms(loss, n, d)
    rho_z = prof.max_zero_region(n, d) if rho_z is None else float(rho_z)
    if loss.rho_0 <= rho_z:
        if case == BEST:
            return BoundResult(0.0, "zero", {"random_baseline": random_best, "reduction": random_best})
        tail = mu * loss.c_l_prime / (n * rho_z)
        return BoundResult(tail, "below_cutoff", {"random_baseline": random_best, "tail": tail})
    # mu c_l rho_z^d / (N d); at rho_z* this is mu c_l Gamma(1+d/2) / (d pi^{d/2})
    reduction = mu * loss.c_l * math.exp(d * math.log(rho_z) - math.log(n)) / d
    best = random_best - reduction
    comps = {"random_baseline": random_best, "reduction": reduction}
    regime = "above_cutoff"
    if best < 0:
        comps["clamped"] = best
        best, regime = 0.0, "zero"
    if case == BEST:
        return BoundResult(best, regime, comps)
    tail = mu * loss.c_l_prime / (n * loss.rho_0)
    comps["tail"] = tail
    return BoundResult(best + tail, "above_cutoff", comps)


def _freq_scale(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return 2.0 * math.pi if convention == "cyclic" else 1.0


def _pds_factor(rho, r_min, fill, v, c):
    """P_S written as (1 - A) + A (1 - Lambda) to avoid cancellation near rho = 0."""
    comp = bessel_lambda_complement(v, c * r_min * np.asarray(rho, dtype=float))
    return comp if fill == 1.0 else (1.0 - fill) + fill * comp


def _pds_low(rho_0, r_min, fill, d, c):
    """int_0^rho_0 rho^{d-1} P_S(rho) d rho."""
    v = 0.5 * d
    half = math.pi / (c * r_min)
    edges = panel_edges(0.0, rho_0, min(half, rho_0))

    def f(rho):
        return rho ** (d - 1) * _pds_factor(rho, r_min, fill, v, c)

    return integrate(f, edges, rtol=1e-12, noise=1e-10)


def _pds_high(rho_0, r_min, fill, d, c):
    """int_{rho_0}^inf rho^{-2} P_S(rho) d rho.

    Panels are half a Bessel period wide up to X, after which the remainder is
    (1/X) plus an oscillating part bounded by the Lambda envelope; X grows until
    that bound is under 1e-8 of the accumulated value.
    """
    v = 0.5 * d
    s = c * r_min
    half = math.pi / s
    env = math.exp(log_gamma(v + 1.0) + v * math.log(2.0)) * math.sqrt(2.0 / math.pi)

    def f(rho):
        return rho ** -2.0 * _pds_factor(rho, r_min, fill, v, c)

    # geometric panels resolve the rho^{-2} weight below the first oscillation
    start = max(rho_0, 0.0)
    knee = max(start, half)
    edges = np.geomspace(start, knee, 40) if knee > start * 1.0001 else np.array([start])
    total, err = integrate(f, edges, rtol=1e-12, noise=1e-10) if len(edges) > 1 else (0.0, 0.0)
    lo = knee
    width = 64 * half
    for _ in range(60):
        hi = lo + width
        part, e = integrate(f, panel_edges(lo, hi, half), rtol=1e-12, noise=1e-10)
        total += part
        err += e
        lo = hi
        remainder = 1.0 / lo
        bound = fill * env * (s * lo) ** (-(v + 0.5)) / lo
        if bound <= _ENVELOPE_RTOL * (total + remainder):
            return total + remainder, err + bound
        width *= 2.0
    raise QuadratureError("oscillatory tail did not reach the envelope tolerance", bound)


def pds_appendix_closed_form(loss: LossSpectrumModel, n, d, convention="angular") -> float:
    """Small-argument best-case PDS estimate.

    mu c_l Gamma^{2/d}(1+d/2) rho_0^{2+d} / (8 pi (1+d/2)^2) N^{-(1+2/d)}, which is
    the leading term of the remainder when the Bessel argument is rho r_min;
    with the cyclic argument 2 pi rho r_min it gains a factor 4 pi^2.
    """
    _check(n, d)
    c = _freq_scale(convention)
    mu = sphere_measure(d).surface
    log_val = (math.log(mu * loss.c_l) + (2.0 / d) * log_gamma(1.0 + 0.5 * d)
               + (2.0 + d) * math.log(loss.rho_0) - math.log(8.0 * math.pi)
               - 2.0 * math.log(1.0 + 0.5 * d) - (1.0 + 2.0 / d) * math.log(n))
    return c * c * math.exp(log_val)


def bound_pds(loss: LossSpectrumModel, n, d, case=None, method="quadrature",
              convention="cyclic", r_min=None) -> BoundResult:
    """Poisson disk (step PCF) sampler at r_min (default: the largest realizable radius)."""
    _check(n, d)
    case = _case(loss, case)
    c = _freq_scale(convention)
    mu, random_best, random_tail = _random_terms(loss, n, d)
    if method == "appendix_closed_form":
        if case != BEST:
            raise ValueError("the closed form covers the best case only")
        value = pds_appendix_closed_form(loss, n, d, convention)
        return BoundResult(value, "numeric", {"random_baseline": random_best,
                                              "correction": random_best - value})
    if method != "quadrature":
        raise ValueError("method must be 'quadrature' or 'appendix_closed_form'")
    if r_min is None:
        r_min, fill = prof.max_rmin(n, d), 1.0
    else:
        fill = math.exp(math.log(n) + sphere_measure(d).log_ball_volume + d * math.log(r_min))
    low, err = _pds_low(loss.rho_0, r_min, fill, d, c)
    best = mu * loss.c_l * low / n
    comps = {"random_baseline": random_best, "correction": random_best - best,
             "achieved_error": mu * loss.c_l * err / n}
    if case == BEST:
        return BoundResult(max(best, 0.0), "numeric", comps)
    high, err_hi = _pds_high(loss.rho_0, r_min, fill, d, c)
    tail = mu * loss.c_l_prime * high / n
    comps["tail"] = tail
    comps["achieved_error"] += mu * loss.c_l_prime * err_hi / n
    return BoundResult(max(best + tail, 0.0), "numeric", comps)


def _sampler_callable(sampler, d):
    """(P_S callable, breakpoints, tail value at infinity, feature scale)."""
    if isinstance(sampler, SpectralProfile):
        if sampler.kind == prof.FLAT:
            return (lambda x: np.ones_like(x)), (), 1.0, None
        if sampler.kind == prof.STEP_PSD:
            rz = sampler.param
            return (lambda x: np.where(x <= rz, 0.0, 1.0)), (rz,), 1.0, None
        rm = sampler.param
        return ((lambda x: prof.pds_psd(np.maximum(x, 1e-300), rm, sampler.n_samples, d)),
                (), 1.0, 2.0 * math.pi * rm)
    rho, vals = sampler.rho_grid, sampler.values

    def f(x):
        return np.interp(x, rho, vals)

    return f, tuple(rho), float(vals[-1]), None


def _loss_callable(loss, d):
    if isinstance(loss, LossSpectrumModel):
        tail = "power" if loss.kind == WORST else "zero"
        return (lambda x: loss.evaluate(x, d)), (loss.rho_0,), tail, loss.rho_0
    rho, vals = loss.rho_grid, loss.values
    tail = "zero" if vals[-1] == 0 else "constant"
    return (lambda x: np.interp(x, rho, vals)), tuple(rho), tail, rho[-1]


def gen_error_radial(sampler, loss, n, d, method="auto") -> BoundResult:
    """(|S^{d-1}|/N) int_0^inf rho^{d-1} E[P_S] P_l d rho.

    ``sampler`` is a SpectralProfile or tabulated RadialSpectrum (held at its
    last value beyond the grid); ``loss`` a LossSpectrumModel or tabulated
    RadialSpectrum. With ``method="auto"`` step-like pairs use closed forms.
    """
    _check(n, d)
    if method not in ("auto", "quadrature"):
        raise ValueError("method must be 'auto' or 'quadrature'")
    if isinstance(loss, RadialSpectrum) and not np.any(loss.values):
        return BoundResult(0.0, "zero", {})
    if method == "auto" and isinstance(sampler, SpectralProfile) and isinstance(loss, LossSpectrumModel):
        if sampler.kind == prof.FLAT:
            return bound_random(loss, n, d)
        if sampler.kind == prof.STEP_PSD:
            return bound_bluenoise(loss, n, d, rho_z=sampler.param)
        return bound_pds(loss, n, d, r_min=sampler.param)
    ps, s_breaks, s_tail, s_scale = _sampler_callable(sampler, d)
    pl, l_breaks, l_tail, l_end = _loss_callable(loss, d)
    if l_tail == "constant" and s_tail != 0.0:
        raise DivergentIntegralError("loss and sampler spectra both fail to decay; integral diverges")
    mu = sphere_measure(d).surface
    ends = [b for b in s_breaks + l_breaks if b > 0]
    end = max(ends) if ends else l_end
    width = end / 64.0
    if s_scale is not None:
        width = min(width, math.pi / s_scale)

    def f(x):
        return x ** (d - 1) * ps(x) * pl(x)

    breaks = tuple(s_breaks) + tuple(l_breaks)
    value, err = integrate(f, panel_edges(0.0, end, width, breaks), rtol=1e-12, noise=1e-10)
    if l_tail == "power":
        if isinstance(sampler, SpectralProfile) and sampler.kind == prof.STEP_PCF:
            fill = math.exp(math.log(n) + sphere_measure(d).log_ball_volume + d * math.log(sampler.param))
            hi, e2 = _pds_high(end, sampler.param, fill, d, 2.0 * math.pi)
            value += loss.c_l_prime * hi
            err += loss.c_l_prime * e2
        else:
            value += loss.c_l_prime * s_tail / end
    return BoundResult(max(mu * value / n, 0.0), "numeric",
                       {"achieved_error": mu * err / n})
