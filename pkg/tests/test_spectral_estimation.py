import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sampspec.pointset import PointSet, generate_poisson_disk, generate_random
from sampspec.spectral_estimation import (
    PairCorrelation,
    RadialSpectrum,
    estimate_pcf,
    estimate_psd,
    lattice_psd,
    structure_factor,
)


def _brute_psd(points, k):
    total = sum(np.exp(-2j * math.pi * np.dot(k, x)) for x in points)
    return abs(total) ** 2 / len(points)


def test_single_point_spectrum_is_one():
    spec = estimate_psd(PointSet([[0.37, 0.81]]), 6)
    np.testing.assert_allclose(spec.values, 1.0, rtol=1e-12)


def test_regular_grid_spectrum():
    spec = estimate_psd(PointSet([[0.0], [0.25], [0.5], [0.75]]), 4)
    np.testing.assert_allclose(spec.values, [0.0, 0.0, 0.0, 4.0], atol=1e-12)
    np.testing.assert_array_equal(spec.rho_grid, [1.0, 2.0, 3.0, 4.0])


def test_regular_grid_full_lattice_sum():
    # the 4-point grid aliases only at multiples of 4: P(+-4) = P(+-8) = 4
    _, p = lattice_psd(PointSet([[0.0], [0.25], [0.5], [0.75]]), 8)
    assert p.sum() - p[8] == pytest.approx(16.0, abs=1e-10)


def test_random_spectrum_mean():
    spec = estimate_psd(generate_random(2, 4096, 1), 48)
    assert 0.95 <= spec.values.mean() <= 1.05


coords = arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 3)),
                elements=st.floats(0.0, 1.0, exclude_max=True))


@settings(max_examples=60, deadline=None)
@given(coords)
def test_lattice_matches_brute_force(pts):
    ps = PointSet(pts)
    k_max = 3
    axis, p = lattice_psd(ps, k_max)
    rng = np.random.default_rng(len(pts))
    for _ in range(5):
        idx = rng.integers(0, len(axis), size=ps.dim)
        k = axis[idx]
        assert p[tuple(idx)] == pytest.approx(_brute_psd(ps.points, k), rel=1e-9, abs=1e-9)
    s = structure_factor(ps.points, axis[idx][None, :])
    assert abs(s[0]) ** 2 / len(ps) == pytest.approx(p[tuple(idx)], rel=1e-9, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(coords, st.integers(1, 6))
def test_psd_is_non_negative(pts, k_max):
    assert np.all(estimate_psd(PointSet(pts), k_max).values >= 0.0)


def test_averaged_random_spectrum_converges():
    def deviation(m):
        acc = np.zeros(16)
        for seed in range(m):
            acc += estimate_psd(generate_random(2, 64, seed), 16).values
        return float(np.sqrt(np.mean((acc / m - 1.0) ** 2)))

    devs = [deviation(m) for m in (100, 200, 400)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.05


def test_psd_rejects_bad_kmax():
    with pytest.raises(ValueError):
        estimate_psd(PointSet([[0.1]]), 0)


def test_pcf_random_1d_is_flat():
    pcf = estimate_pcf(generate_random(1, 2000, 3), np.linspace(0.05, 0.45, 81))
    assert np.all((pcf.values > 0.9) & (pcf.values < 1.1))


def test_pcf_tends_to_one():
    pcf = estimate_pcf(generate_random(2, 1000, 4))
    tail = pcf.values[3 * len(pcf.values) // 4:]
    assert tail.mean() == pytest.approx(1.0, abs=0.1)
    assert pcf.intensity == 1000


def test_pcf_hard_core_exclusion():
    r_min = 0.05
    ps = generate_poisson_disk(2, r_min, 9, max_attempts=1000)
    assert len(ps) >= 200
    r = np.linspace(0.002, 0.9 * r_min, 40)
    pcf = estimate_pcf(ps, r, bandwidth=r_min / 30)
    assert np.all(pcf.values < 0.1)


def test_pcf_single_pair_peaks_at_distance():
    ps = PointSet([[0.1], [0.4]])
    r = np.linspace(0.005, 0.5, 100)
    pcf = estimate_pcf(ps, r, bandwidth=0.01)
    assert r[np.argmax(pcf.values)] == pytest.approx(0.3, abs=0.005)


@pytest.mark.parametrize(
    "kwargs",
    [dict(r_grid=[0.1, 0.6]), dict(r_grid=[0.2, 0.1]), dict(r_grid=[0.0, 0.1]), dict(bandwidth=0.0)],
)
def test_pcf_argument_errors(kwargs):
    with pytest.raises(ValueError):
        estimate_pcf(generate_random(2, 10, 0), **kwargs)


def test_pcf_needs_two_points():
    with pytest.raises(ValueError):
        estimate_pcf(PointSet([[0.5, 0.5]]))


def test_table_csv_round_trip():
    spec = RadialSpectrum([1.0, 2.0, 3.5], [0.1, 1.0 / 3.0, 2.0], 10, 2)
    back = RadialSpectrum.from_csv(spec.to_csv(), 10, 2)
    np.testing.assert_array_equal(back.values, spec.values)
    assert spec.to_csv().splitlines()[0] == "rho,value"
    pcf = PairCorrelation([0.1, 0.2], [0.0, 1.0])
    assert PairCorrelation.from_csv(pcf.to_csv()).r_grid.tolist() == [0.1, 0.2]
    with pytest.raises(ValueError):
        PairCorrelation.from_csv(spec.to_csv())


@pytest.mark.parametrize("grid", [[0.0, 1.0], [2.0, 1.0], [1.0, 1.0]])
def test_spectrum_grid_validation(grid):
    with pytest.raises(ValueError):
        RadialSpectrum(grid, [1.0, 1.0])
