"""Adaptive panel Gauss-Legendre quadrature shared by transforms and bounds."""
from __future__ import annotations

import numpy as np

_X10, _W10 = np.polynomial.legendre.leggauss(10)
_X20, _W20 = np.polynomial.legendre.leggauss(20)
_EPS = np.finfo(float).eps
_MAX_PANELS = 200_000


class QuadratureError(RuntimeError):
    """Raised when adaptive refinement fails to reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


def panel_edges(a, b, width, breakpoints=()):
    """Sorted panel edges covering [a, b] with spacing <= width, including breakpoints."""
    if b <= a:
        return np.array([a, b], dtype=float)
    n = max(1, int(np.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    extra = [p for p in breakpoints if a < p < b]
    if extra:
        edges = np.union1d(edges, extra)
    return edges


def _gl(func, lo, hi, nodes, weights):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    fx = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise ValueError("integrand produced non-finite values")
    return half * (fx @ weights), half * (np.abs(fx) @ weights)


def integrate(func, edges, rtol=1e-12, atol=0.0, max_rounds=40, noise=50.0 * _EPS, abs_rtol=0.0):
    """Integrate a vectorised ``func`` over the panels defined by ``edges``.

    Each panel is evaluated with 10- and 20-point Gauss-Legendre rules; panels
    whose two estimates disagree by more than their share of the tolerance are
    bisected. A panel is also accepted once its error is below ``noise`` times
    its integral of |f|, the relative accuracy of the integrand itself.
    ``abs_rtol`` sets a global target relative to int |f| for integrals whose
    value cancels far below their magnitude.
    Returns ``(value, error_estimate)``.
    """
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return 0.0, 0.0
    length = float(hi[-1] - lo[0]) if hi.size else 0.0
    done = 0.0
    done_err = 0.0
    done_abs = 0.0
    for _ in range(max_rounds):
        coarse, _ = _gl(func, lo, hi, _X10, _W10)
        fine, absval = _gl(func, lo, hi, _X20, _W20)
        err = np.abs(fine - coarse)
        total = done + float(np.sum(fine))
        # floor the target at rounding level of int |f| so cancelling integrals converge
        floor = max(100.0 * _EPS, abs_rtol) * (done_abs + float(np.sum(absval)))
        scale = max(atol, rtol * abs(total), floor)
        share = scale * (hi - lo) / length
        ok = (err <= share) | (err <= noise * absval)
        done += float(np.sum(fine[ok]))
        done_err += float(np.sum(err[ok]))
        done_abs += float(np.sum(absval[ok]))
        if np.all(ok):
            return done, done_err
        lo, hi = lo[~ok], hi[~ok]
        if lo.size > _MAX_PANELS:
            break
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]
    raise QuadratureError("adaptive quadrature did not converge", done_err + float(np.sum(err[~ok])))
