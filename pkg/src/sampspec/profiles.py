"""Analytic spectral profiles of the random, step blue-noise and step-PCF samplers.

Frequencies are cyclic (the exp(-2 pi i k.x) convention of the periodogram).
The step-PCF spectrum is also available in the angular-frequency form
1 - N (2 pi r/rho)^{d/2} J_{d/2}(rho r) through ``convention="angular"``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .specialfn import (
    bessel_lambda,
    bessel_lambda_complement,
    log_ball_volume,
)

__all__ = [
    "SpectralProfile",
    "FLAT",
    "STEP_PSD",
    "STEP_PCF",
    "eval_psd",
    "eval_pcf",
    "bluenoise_pcf",
    "pds_psd",
    "max_zero_region",
    "min_samples_for_zero_region",
    "max_rmin",
    "min_samples_for_rmin",
    "log_max_zero_region",
    "log_max_rmin",
]

FLAT = "Flat"
STEP_PSD = "StepPSD"
STEP_PCF = "StepPCF"
_KINDS = (FLAT, STEP_PSD, STEP_PCF)
CONVENTIONS = ("cyclic", "angular")


@dataclass(frozen=True)
class SpectralProfile:
    kind: str
    n_samples: int
    dim: int
    param: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.n_samples < 1 or self.dim < 1:
            raise ValueError("n_samples and dim must be >= 1")
        if self.kind == FLAT:
            if self.param is not None:
                raise ValueError("Flat profile takes no parameter")
        elif self.param is None or not self.param > 0:
            raise ValueError(f"{self.kind} needs a positive parameter")

    @classmethod
    def flat(cls, n, d):
        return cls(FLAT, n, d)

    @classmethod
    def step_psd(cls, rho_z, n, d):
        return cls(STEP_PSD, n, d, float(rho_z))

    @classmethod
    def step_pcf(cls, r_min, n, d):
        return cls(STEP_PCF, n, d, float(r_min))

    @classmethod
    def optimal_step_psd(cls, n, d):
        return cls.step_psd(max_zero_region(n, d), n, d)

    @classmethod
    def optimal_step_pcf(cls, n, d):
        return cls.step_pcf(max_rmin(n, d), n, d)

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "param": self.param, "N": self.n_samples, "d": self.dim})

    @classmethod
    def from_json(cls, text: str) -> "SpectralProfile":
        obj = json.loads(text)
        return cls(obj["kind"], int(obj["N"]), int(obj["d"]), obj.get("param"))


def _positive(x, name):
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError(f"{name} must be > 0")
    return x, scalar


def _ret(a, scalar):
    return float(a) if scalar else a


def _log_fill(n, r, d):
    # log of N * V_d * r^d: the step-PCF excluded volume relative to the torus
    return math.log(n) + log_ball_volume(d) + d * math.log(r)


def pds_psd(rho, r_min, n, d, convention="cyclic"):
    """Spectrum of an ideal step-PCF pattern.

    Written as (1 - A) + A (1 - Lambda_{d/2}(x)) with A = N V_d r_min^d so the
    small-frequency region carries no cancellation.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    rho, scalar = _positive(rho, "rho")
    fill = math.exp(_log_fill(n, r_min, d))
    x = (2.0 * math.pi * rho * r_min) if convention == "cyclic" else rho * r_min
    out = (1.0 - fill) + fill * bessel_lambda_complement(0.5 * d, x)
    return _ret(out, scalar)


def bluenoise_pcf(rho_z, n, d, r, approximate=False):
    """G(r) = 1 - (1/N) (rho_z/r)^{d/2} J_{d/2}(2 pi rho_z r).

    With ``approximate=True`` the Bessel factor is replaced by its leading
    small-argument term, which makes G constant in r.
    """
    r, scalar = _positive(r, "r")
    # (rho_z/r)^{d/2} J_{d/2}(2 pi rho_z r) = rho_z^d V_d Lambda_{d/2}(2 pi rho_z r)
    amp = math.exp(d * math.log(rho_z) + log_ball_volume(d) - math.log(n))
    if approximate:
        out = np.full_like(r, 1.0 - amp)
    else:
        out = 1.0 - amp * bessel_lambda(0.5 * d, 2.0 * math.pi * rho_z * r)
    return _ret(out, scalar)


def eval_psd(profile: SpectralProfile, rho, convention="cyclic"):
    rho, scalar = _positive(rho, "rho")
    if profile.kind == FLAT:
        out = np.ones_like(rho)
    elif profile.kind == STEP_PSD:
        out = np.where(rho <= profile.param, 0.0, 1.0)
    else:
        out = pds_psd(rho, profile.param, profile.n_samples, profile.dim, convention)
    return _ret(out, scalar)


def eval_pcf(profile: SpectralProfile, r):
    r, scalar = _positive(r, "r")
    if profile.kind == FLAT:
        out = np.ones_like(r)
    elif profile.kind == STEP_PCF:
        out = np.where(r <= profile.param, 0.0, 1.0)
    else:
        out = bluenoise_pcf(profile.param, profile.n_samples, profile.dim, r)
    return _ret(out, scalar)


def log_max_zero_region(n, d):
    return (math.log(n) - log_ball_volume(d)) / d


def log_max_rmin(n, d):
    return (-math.log(n) - log_ball_volume(d)) / d


def max_zero_region(n, d) -> float:
    """Largest step blue-noise zero region rho_z* = (N Gamma(1+d/2) / pi^{d/2})^{1/d}."""
    if n <= 0 or d < 1:
        raise ValueError("need n > 0 and d >= 1")
    return math.exp(log_max_zero_region(n, d))


def min_samples_for_zero_region(rho_z, d) -> float:
    """Inverse of max_zero_region: pi^{d/2} rho_z^d / Gamma(1+d/2), not rounded."""
    return math.exp(d * math.log(rho_z) + log_ball_volume(d))


def max_rmin(n, d) -> float:
    """Largest step-PCF radius r_min* = (Gamma(1+d/2) / (pi^{d/2} N))^{1/d}."""
    if n <= 0 or d < 1:
        raise ValueError("need n > 0 and d >= 1")
    return math.exp(log_max_rmin(n, d))


def min_samples_for_rmin(r_min, d) -> float:
    return math.exp(-d * math.log(r_min) - log_ball_volume(d))
