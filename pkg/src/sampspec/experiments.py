"""Monte Carlo checks of the spectral variance identity and parameter sweeps."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from . import profiles as prof
from .bounds import LossSpectrumModel
from .pointset import PointSet, generate_poisson_disk, generate_random
from .specialfn import log_ball_volume
from .spectral_estimation import structure_factor

__all__ = [
    "TestLoss",
    "Sampler",
    "GenErrorEstimate",
    "IdentityReport",
    "SweepResult",
    "empirical_gen_error",
    "validate_spectral_identity",
    "convergence_sweep",
    "dimension_sweep",
    "METRICS",
    "SAMPLER_FAMILIES",
]

MIN_REALIZATIONS = 1000


@dataclass(frozen=True)
class TestLoss:
    """Real trigonometric polynomial l(x) = sum_k c_k exp(2 pi i k.x) on the torus.

    Coefficients are stored for every frequency, including both members of each
    conjugate pair, so P_l(k) = |c_k|^2 and R_P = c_0.
    """

    __test__ = False  # not a pytest class

    dim: int
    freqs: tuple
    coeffs: tuple

    def __post_init__(self):
        k = np.asarray(self.freqs, dtype=np.int64).reshape(-1, self.dim)
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if len(k) != len(c):
            raise ValueError("one coefficient per frequency")
        lookup = {tuple(row): val for row, val in zip(k.tolist(), c)}
        if len(lookup) != len(k):
            raise ValueError("duplicate frequencies")
        for row, val in lookup.items():
            mirror = lookup.get(tuple(-x for x in row), 0.0)
            if not np.isclose(mirror, np.conj(val), rtol=1e-12, atol=1e-15):
                raise ValueError("coefficients must be Hermitian so the loss is real")

    @classmethod
    def cosine(cls, freq, amplitude=1.0):
        """amplitude * cos(2 pi k.x)."""
        k = tuple(int(x) for x in np.atleast_1d(freq))
        if not any(k):
            raise ValueError("cosine frequency must be non-zero")
        neg = tuple(-x for x in k)
        return cls(len(k), (k, neg), (0.5 * amplitude, 0.5 * amplitude))

    @classmethod
    def truncated_fourier(cls, dim, terms):
        """Sum of ``a cos(2 pi k.x) + b sin(2 pi k.x)`` for ``(k, a, b)`` in ``terms``, plus any constant."""
        table = {}
        for k, a, b in terms:
            k = tuple(int(x) for x in np.atleast_1d(k))
            if len(k) != dim:
                raise ValueError("frequency dimension mismatch")
            if not any(k):
                table[k] = table.get(k, 0.0) + a
                continue
            neg = tuple(-x for x in k)
            table[k] = table.get(k, 0.0) + 0.5 * (a - 1j * b)
            table[neg] = table.get(neg, 0.0) + 0.5 * (a + 1j * b)
        keys = tuple(sorted(table))
        return cls(dim, keys, tuple(complex(table[k]) for k in keys))

    @classmethod
    def constant(cls, dim, value):
        return cls(dim, (tuple([0] * dim),), (complex(value),))

    @property
    def _k(self):
        return np.asarray(self.freqs, dtype=float).reshape(-1, self.dim)

    @property
    def _c(self):
        return np.asarray(self.coeffs, dtype=complex)

    @property
    def population_risk(self) -> float:
        nz = ~np.any(self._k != 0, axis=1)
        return float(np.real(self._c[nz].sum()))

    def power(self):
        """(frequencies, |c_k|^2) for k != 0."""
        nz = np.any(self._k != 0, axis=1)
        return self._k[nz], np.abs(self._c[nz]) ** 2

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        phase = 2.0 * math.pi * x @ self._k.T
        return np.real(np.exp(1j * phase) @ self._c)


@dataclass(frozen=True)
class Sampler:
    """Seeded point-set source: ``random`` (N uniform points) or ``pds`` (dart throwing)."""

    kind: str
    dim: int
    r_min: float | None = None
    max_attempts: int | None = None

    def __post_init__(self):
        if self.kind not in ("random", "pds"):
            raise ValueError("sampler kind must be 'random' or 'pds'")
        if self.kind == "pds" and self.r_min is None:
            raise ValueError("pds sampler needs r_min")

    def draw(self, n, seed) -> PointSet:
        if self.kind == "random":
            return generate_random(self.dim, n, seed)
        return generate_poisson_disk(self.dim, self.r_min, seed, self.max_attempts)


@dataclass(frozen=True)
class GenErrorEstimate:
    value: float
    stderr: float
    bias: float
    bias_stderr: float
    n_realizations: int
    mean_n: float


@dataclass(frozen=True)
class IdentityReport:
    empirical: float
    spectral: float
    relative_deviation: float
    empirical_stderr: float
    spectral_stderr: float
    n_realizations: int
    mean_n: float

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def _realizations(loss: TestLoss, sampler: Sampler, n, n_realizations, seed):
    if sampler.dim != loss.dim:
        raise ValueError("sampler and loss dimensions differ")
    if n_realizations < MIN_REALIZATIONS:
        raise ValueError(f"need at least {MIN_REALIZATIONS} realizations")
    if seed < 0 or seed + n_realizations - 1 > 2**64 - 1:
        raise ValueError("seed range must stay within 64-bit unsigned integers")
    k, power = loss.power()
    c = loss._c[np.any(loss._k != 0, axis=1)]
    err = np.empty(n_realizations)
    spec = np.empty(n_realizations)
    sizes = np.empty(n_realizations)
    for i in range(n_realizations):
        ps = sampler.draw(n, seed + i)
        m = len(ps)
        if len(k):
            s = structure_factor(ps.points, k)
            # R_S - R_P = (1/N) sum_{k != 0} c_k conj(S(k)), S(k) = sum_j exp(-2 pi i k.x_j)
            err[i] = np.real(c @ np.conj(s)) / m
            spec[i] = float(power @ (np.abs(s) ** 2 / m)) / m
        else:
            err[i] = spec[i] = 0.0
        sizes[i] = m
    return err, spec, sizes


def _sem(x):
    return float(np.std(x, ddof=1) / math.sqrt(len(x))) if len(x) > 1 else math.nan


def empirical_gen_error(loss: TestLoss, sampler: Sampler, n, n_realizations, seed=0) -> GenErrorEstimate:
    """Mean of (R_P - R_S)^2 over seeded realizations, with the bias mean(R_S) - R_P."""
    err, _, sizes = _realizations(loss, sampler, n, n_realizations, seed)
    sq = err * err
    return GenErrorEstimate(float(sq.mean()), _sem(sq), float(err.mean()), _sem(err),
                            n_realizations, float(sizes.mean()))


def validate_spectral_identity(loss: TestLoss, sampler: Sampler, n, n_realizations, seed=0) -> IdentityReport:
    """Compare mean (R_P - R_S)^2 with (1/N) sum_{k != 0} P_S(k) P_l(k) on the same realizations."""
    err, spec, sizes = _realizations(loss, sampler, n, n_realizations, seed)
    emp = float(np.mean(err * err))
    rhs = float(np.mean(spec))
    dev = abs(emp - rhs) / rhs if rhs > 0 else (0.0 if emp == 0 else math.inf)
    return IdentityReport(emp, rhs, dev, _sem(err * err), _sem(spec), n_realizations, float(sizes.mean()))


@dataclass
class SweepResult:
    axis_name: str
    axis: np.ndarray
    values: np.ndarray
    slope: float = math.nan
    intercept: float = math.nan
    residual: float = math.nan
    degenerate: bool = False
    regime_notes: list = field(default_factory=list)
    log_values: np.ndarray | None = None
    extrema: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = [f"{self.axis_name},value"]
        for a, v in zip(self.axis, self.values):
            a = int(a) if float(a).is_integer() else float(a)
            lines.append(f"{a!r},{float(v)!r}")
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        out = {
            "slope": _jsonable(self.slope),
            "intercept": _jsonable(self.intercept),
            "residual": _jsonable(self.residual),
            "regime_notes": list(self.regime_notes),
        }
        if self.degenerate:
            out["degenerate"] = True
        if self.axis_name == "d":
            out["extrema"] = self.extrema
        return out

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def _jsonable(x):
    return None if x is None or not math.isfinite(x) else float(x)


def fit_loglog(x, y):
    """OLS of log y on log x; returns (slope, intercept, rms residual)."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    design = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - design @ coef
    return float(coef[0]), float(coef[1]), float(math.sqrt(np.mean(resid ** 2)))


SAMPLER_FAMILIES = ("random", "bluenoise", "pds", "pds_appendix")


def _bound(family, loss, n, d, case, convention):
    if family == "random":
        return bounds.bound_random(loss, n, d, case)
    if family == "bluenoise":
        return bounds.bound_bluenoise(loss, n, d, case)
    if family == "pds":
        return bounds.bound_pds(loss, n, d, case, convention=convention)
    if family == "pds_appendix":
        return bounds.bound_pds(loss, n, d, case, method="appendix_closed_form", convention=convention)
    raise ValueError(f"unknown sampler family {family!r}; choose from {SAMPLER_FAMILIES}")


def _check_axis(axis, name):
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or np.any(np.diff(axis) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return axis


def convergence_sweep(sampler_family, loss_model: LossSpectrumModel, d, n_list, case=None,
                      convention="cyclic") -> SweepResult:
    """Bounds over N with a least-squares log-log slope."""
    n_list = _check_axis(n_list, "N_list")
    if len(n_list) < 5 or n_list[-1] / n_list[0] < 100.0:
        raise ValueError("slope fit needs >= 5 values of N spanning >= 2 decades")
    results = [_bound(sampler_family, loss_model, int(n), d, case, convention) for n in n_list]
    values = np.array([r.value for r in results])
    notes = []
    for prev, (n, cur) in zip(results, zip(n_list[1:], results[1:])):
        if cur.regime != prev.regime:
            notes.append(f"regime {prev.regime} -> {cur.regime} at N={int(n)}")
    out = SweepResult("N", n_list.astype(np.int64), values, regime_notes=notes)
    if np.any(values <= 0):
        out.degenerate = True
        out.regime_notes.append("zero bounds; slope not fitted")
        return out
    out.slope, out.intercept, out.residual = fit_loglog(n_list, values)
    return out


def _log_metric(metric, params, d):
    if metric == "rho_z_star":
        return prof.log_max_zero_region(params["N"], d)
    if metric == "r_min_star":
        return prof.log_max_rmin(params["N"], d)
    if metric == "relative_rho_z":
        return prof.log_max_zero_region(params["N"], d) - 0.5 * math.log(d)
    if metric == "relative_rmin":
        return prof.log_max_rmin(params["N"], d) - 0.5 * math.log(d)
    if metric == "n_min_for_rho_z":
        return log_ball_volume(d) + d * math.log(params["rho_z"])
    if metric == "n_min_for_rmin":
        return -log_ball_volume(d) - d * math.log(params["r_min"])
    raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")


METRICS = ("rho_z_star", "n_min_for_rho_z", "r_min_star", "n_min_for_rmin", "relative_rho_z", "relative_rmin")


def dimension_sweep(metric, params, d_list) -> SweepResult:
    """Evaluate a dimension metric in log space and locate interior extrema."""
    d_list = _check_axis(d_list, "d_list")
    if np.any(d_list < 1) or np.any(d_list != np.round(d_list)):
        raise ValueError("d_list must contain positive integers")
    logs = np.array([_log_metric(metric, params, int(d)) for d in d_list])
    with np.errstate(over="ignore"):
        values = np.exp(logs)
    extrema = []
    for i in range(1, len(logs) - 1):
        if logs[i] > logs[i - 1] and logs[i] >= logs[i + 1]:
            extrema.append({"d": int(d_list[i]), "kind": "max", "log_value": float(logs[i])})
        elif logs[i] < logs[i - 1] and logs[i] <= logs[i + 1]:
            extrema.append({"d": int(d_list[i]), "kind": "min", "log_value": float(logs[i])})
    notes = [f"interior {e['kind']} at d={e['d']}" for e in extrema]
    return SweepResult("d", d_list.astype(np.int64), values, regime_notes=notes,
                       log_values=logs, extrema=extrema)
