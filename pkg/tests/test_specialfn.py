import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sampspec.specialfn import (
    bessel_j,
    bessel_lambda,
    bessel_lambda_complement,
    bessel_small_arg,
    gamma,
    log_gamma,
    log_ball_volume,
    sphere_measure,
)

mpmath.mp.dps = 30


@pytest.mark.parametrize(
    "x, expected",
    [
        (0.5, 1.7724538509055159),  # sqrt(pi)
        (1.0, 1.0),
        (1.5, 0.88622692545275801),  # sqrt(pi)/2
        (5.0, 24.0),
        (10.0, 362880.0),
    ],
)
def test_gamma_known_values(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        gamma(x)
    with pytest.raises(ValueError):
        log_gamma(x)


def test_gamma_overflow_is_reported():
    with pytest.raises(OverflowError):
        gamma(200.0)
    assert math.isfinite(log_gamma(200.0))


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=170.0))
def test_gamma_matches_mpmath(x):
    assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e6))
def test_log_gamma_matches_mpmath(x):
    ref = float(mpmath.loggamma(x))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.5, max_value=150.0))
def test_log_gamma_consistent_with_gamma(x):
    assert abs(log_gamma(x) - math.log(gamma(x))) < 1e-12 * max(1.0, abs(log_gamma(x)))


def test_gamma_vectorised():
    xs = np.array([0.5, 1.0, 5.0])
    np.testing.assert_allclose(gamma(xs), [math.sqrt(math.pi), 1.0, 24.0], rtol=1e-12)


@pytest.mark.parametrize(
    "v, x, expected",
    [
        (0, 0, 1.0),
        (1, 0, 0.0),
        (1, 1, 0.44005058574493352),
        (1, math.pi, 0.28461534317975276),
        (0, 2.404825557695773, 0.0),  # first zero of J_0
    ],
)
def test_bessel_known_values(v, x, expected):
    assert bessel_j(v, x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 13.9, 14.1, 40.0])
def test_bessel_half_order_closed_form(x):
    assert bessel_j(0.5, x) == pytest.approx(math.sqrt(2 / (math.pi * x)) * math.sin(x), abs=1e-11)
    assert bessel_j(1.5, x) == pytest.approx(
        math.sqrt(2 / (math.pi * x)) * (math.sin(x) / x - math.cos(x)), abs=1e-11
    )


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0.0, max_value=25.0), st.floats(min_value=0.0, max_value=200.0))
def test_bessel_matches_mpmath(v, x):
    ref = float(mpmath.besselj(v, x))
    assert bessel_j(v, x) == pytest.approx(ref, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("v, x", [(-0.5, 1.0), (0.0, -1.0), (1.0, math.inf), (1.0, math.nan)])
def test_bessel_domain(v, x):
    with pytest.raises(ValueError):
        bessel_j(v, x)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=20.0), st.floats(min_value=0.0, max_value=1.0))
def test_bessel_small_argument_agreement(v, frac):
    # the relative gap is x^2 / (4 (v+1)) to leading order, so the window scales with sqrt(1+v)
    x = frac * 0.05 * math.sqrt(1 + v)
    small = bessel_small_arg(v, x)
    if small == 0.0:
        assert bessel_j(v, x) == 0.0
    else:
        assert bessel_j(v, x) == pytest.approx(small, rel=1e-3)


@pytest.mark.parametrize("v, x", [(0.0, 0.05), (1.0, 0.1), (20.0, 1.05)])
def test_small_argument_gap_is_second_order(v, x):
    gap = 1.0 - bessel_j(v, x) / bessel_small_arg(v, x)
    assert gap == pytest.approx(x * x / (4 * (v + 1)), rel=0.02)


@pytest.mark.parametrize(
    "v, x, expected",
    [(1, 0.2, 0.1), (2, 0.0, 0.0), (0.5, 1.0, 0.79788456080286536)],
)
def test_bessel_small_arg_values(v, x, expected):
    assert bessel_small_arg(v, x) == pytest.approx(expected, rel=1e-12, abs=1e-300)


@settings(max_examples=150, deadline=None)
@given(st.floats(min_value=0.0, max_value=10.0), st.floats(min_value=0.0, max_value=100.0))
def test_lambda_bounded_and_complementary(v, x):
    lam = bessel_lambda(v, x)
    assert abs(lam) <= 1.0 + 1e-12
    assert lam + bessel_lambda_complement(v, x) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("v", [0.5, 1.0, 1.5, 3.0])
@pytest.mark.parametrize("x", [1e-8, 1e-4, 0.1, 2.0, 4.0, 7.0])
def test_lambda_complement_relative_accuracy(v, x):
    # 1 - Gamma(v+1) (2/x)^v J_v(x), evaluated at high precision
    lam = mpmath.gamma(v + 1) * (2 / mpmath.mpf(x)) ** v * mpmath.besselj(v, x)
    assert bessel_lambda_complement(v, x) == pytest.approx(float(1 - lam), rel=1e-9)


def test_lambda_at_origin():
    assert bessel_lambda(1.0, 0.0) == 1.0
    assert bessel_lambda_complement(1.0, 0.0) == 0.0


@pytest.mark.parametrize(
    "d, surface, volume",
    [(1, 2.0, 2.0), (2, 2 * math.pi, math.pi), (3, 4 * math.pi, 4 * math.pi / 3)],
)
def test_sphere_measure_values(d, surface, volume):
    m = sphere_measure(d)
    assert m.surface == pytest.approx(surface, rel=1e-13)
    assert m.ball_volume == pytest.approx(volume, rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=2000))
def test_sphere_surface_is_d_times_volume(d):
    m = sphere_measure(d)
    assert m.ball_volume * d == pytest.approx(m.surface, rel=1e-12, abs=1e-300)
    assert m.log_ball_volume == pytest.approx(log_ball_volume(d), rel=1e-14)


def test_sphere_measure_large_d_in_log_space():
    m = sphere_measure(1000)
    ref = float(mpmath.log(mpmath.pi ** 500 / mpmath.gamma(501)))
    assert m.log_ball_volume == pytest.approx(ref, rel=1e-12)


def test_ball_volume_peaks_at_five():
    vols = [sphere_measure(d).ball_volume for d in range(1, 30)]
    peak = int(np.argmax(vols)) + 1
    assert peak == 5
    assert all(a < b for a, b in zip(vols[:4], vols[1:5]))
    assert all(a > b for a, b in zip(vols[4:], vols[5:]))


@pytest.mark.parametrize("d", [0, -1, 2.5])
def test_sphere_measure_rejects_bad_dimension(d):
    with pytest.raises(ValueError):
        sphere_measure(d)
