"""Channel component tests: LOS probability, K factor, fading, shadowing,
path loss, antenna pattern."""

import math

import numpy as np
import pytest
from scipy import integrate, special
from scipy import stats as scipy_stats

from udnsim.channel import (AntennaPattern, antenna_gain_db, p_los,
                            path_loss_db, rician_k, sample_fading_power,
                            sample_shadowing, shadow_cross_correlation)


# --- LOS probability ---------------------------------------------------------

def test_p_los_equals_one_inside_guaranteed_zone():
    for d in (0.0, 5.0, 10.0, 17.999, 18.0):
        assert p_los(d) == pytest.approx(1.0, abs=1e-12)


def test_p_los_values():
    assert p_los(36.0) == pytest.approx(0.5 * (1 - math.exp(-1)) + math.exp(-1),
                                        rel=1e-12)
    assert p_los(36.0) == pytest.approx(0.6839, abs=1e-4)
    assert p_los(100.0) == pytest.approx(0.2310, abs=1e-4)


def test_p_los_monotone_decreasing_beyond_18m():
    d = np.linspace(18.0, 2000.0, 4000)
    values = p_los(d)
    assert np.all(np.diff(values) < 0)
    assert p_los(1e5) < 1e-3


def test_p_los_continuous_at_18m():
    assert p_los(18.0 - 1e-9) == pytest.approx(p_los(18.0 + 1e-9), abs=1e-6)


# --- Rician K factor ---------------------------------------------------------

def test_rician_k_values():
    assert rician_k(5.0) == 32.0
    assert rician_k(17.999) == 32.0
    assert rician_k(30.0) == pytest.approx(140.10 * math.exp(-0.107 * 30.0),
                                           rel=1e-12)
    assert rician_k(30.0) == pytest.approx(5.654, abs=1e-3)
    assert rician_k(50.0) == pytest.approx(0.665, abs=1e-3)


def test_rician_k_discontinuity_at_18m():
    # The two branches are calibrated separately: 32 inside, ~20.4 just
    # outside. The jump is part of the model.
    assert rician_k(17.9999) == 32.0
    assert rician_k(18.0) == pytest.approx(140.10 * math.exp(-0.107 * 18.0),
                                           rel=1e-12)
    assert rician_k(18.0) == pytest.approx(20.417, abs=1e-3)


def test_rician_k_non_increasing_on_each_branch():
    inside = rician_k(np.linspace(0, 17.99, 100))
    outside = rician_k(np.linspace(18, 300, 500))
    assert np.all(np.diff(inside) <= 0)
    assert np.all(np.diff(outside) < 0)


def test_rician_k_tracks_los_odds_ratio():
    # The decay branch approximates p_los/(1 - p_los). The fit is within a
    # factor of two up to ~50 m and degrades to ~3x by 60 m.
    for d in np.linspace(25.0, 50.0, 15):
        odds = p_los(d) / (1.0 - p_los(d))
        ratio = rician_k(d) / odds
        assert 0.5 <= ratio <= 2.0, (d, ratio)
    for d in np.linspace(50.0, 60.0, 5):
        odds = p_los(d) / (1.0 - p_los(d))
        ratio = rician_k(d) / odds
        assert 0.25 <= ratio <= 2.0, (d, ratio)


# --- fast fading -------------------------------------------------------------

def test_fading_unit_mean_for_all_k():
    rng = np.random.default_rng(2024)
    for k in (0.0, 0.5, 1.0, 4.0, 32.0, 200.0):
        power = sample_fading_power(np.full(100000, k), rng)
        assert power.mean() == pytest.approx(1.0, abs=0.01), k


def test_fading_rayleigh_is_exponential():
    rng = np.random.default_rng(5)
    power = sample_fading_power(np.zeros(100000), rng)
    result = scipy_stats.kstest(power, "expon")
    assert result.pvalue > 0.01


def test_fading_k32_db_std_close_to_one():
    # Characterization of the unit-mean sampler: the power std at K=32 is
    # sqrt(2K+1)/(K+1) ~ 0.244, i.e. ~1.06 dB after the log map.
    rng = np.random.default_rng(6)
    power = sample_fading_power(np.full(200000, 32.0), rng)
    db_std = (10 * np.log10(power)).std()
    assert 0.95 < db_std < 1.20


def test_fading_amplitude_matches_rician_pdf_k4():
    # Oracle: numerical integration of the Rician amplitude PDF
    #   f(x) = 2(K+1)x exp(-K - (K+1)x^2) I0(2 sqrt(K(K+1)) x)
    # with unit total power, turned into a CDF for a KS test at 1%.
    k = 4.0

    def pdf(x):
        return (2 * (k + 1) * x * np.exp(-k - (k + 1) * x * x)
                * special.i0(2 * math.sqrt(k * (k + 1)) * x))

    grid = np.linspace(0.0, 6.0, 20001)
    cdf_grid = integrate.cumulative_trapezoid(pdf(grid), grid, initial=0.0)
    cdf_grid /= cdf_grid[-1]

    def cdf(x):
        return np.interp(x, grid, cdf_grid)

    rng = np.random.default_rng(8)
    amplitude = np.sqrt(sample_fading_power(np.full(100000, k), rng))
    result = scipy_stats.kstest(amplitude, cdf)
    assert result.pvalue > 0.01


def test_fading_determinism():
    a = sample_fading_power(np.full(64, 4.0), np.random.default_rng(33))
    b = sample_fading_power(np.full(64, 4.0), np.random.default_rng(33))
    np.testing.assert_array_equal(a, b)


def test_fading_stream_alignment_across_k():
    # Paired runs that differ only in K must consume identical draws:
    # K = 0 output is a deterministic function of the K = 4 run's NLOS part.
    rng_a = np.random.default_rng(12)
    rng_b = np.random.default_rng(12)
    pow_k0 = sample_fading_power(np.zeros(1000), rng_a)
    pow_k4 = sample_fading_power(np.full(1000, 4.0), rng_b)
    assert pow_k0.shape == pow_k4.shape
    # Same stream, different mixes: outputs differ but stay correlated
    # (analytic correlation 1/(K+1) / sqrt((2K+1)/(K+1)^2) = 1/3 at K = 4).
    assert not np.allclose(pow_k0, pow_k4)
    assert np.corrcoef(pow_k0, pow_k4)[0, 1] > 0.2


# --- shadowing ---------------------------------------------------------------

def test_shadow_cross_correlation_values():
    assert shadow_cross_correlation(0.0, 20.0) == pytest.approx(1.0)
    assert shadow_cross_correlation(20.0, 20.0) == pytest.approx(
        math.sqrt(0.25 + math.exp(-2.0)), rel=1e-12)
    assert shadow_cross_correlation(20.0, 20.0) == pytest.approx(0.6208,
                                                                 abs=1e-4)
    assert shadow_cross_correlation(1e9, 20.0) == pytest.approx(0.5, abs=1e-9)


def test_shadow_cross_correlation_monotone_and_bounded():
    isds = np.linspace(0.0, 500.0, 200)
    rhos = [shadow_cross_correlation(isd, 20.0) for isd in isds]
    assert all(b <= a + 1e-15 for a, b in zip(rhos, rhos[1:]))
    assert all(0.5 <= r <= 1.0 for r in rhos)


def test_shadowing_rho_one_identical_entries():
    field = sample_shadowing(7, 1.0, 4.0, np.random.default_rng(0))
    assert np.allclose(field.values_db, field.values_db[0])


def test_shadowing_rho_zero_independent_marginals():
    rng = np.random.default_rng(1)
    values = sample_shadowing(2, 0.0, 4.0, rng, size=200000)
    assert values.std(axis=0) == pytest.approx([4.0, 4.0], abs=0.05)
    corr = np.corrcoef(values[:, 0], values[:, 1])[0, 1]
    assert abs(corr) < 0.01


def test_shadowing_pairwise_correlation_converges():
    rng = np.random.default_rng(17)
    rho = 0.62
    values = sample_shadowing(7, rho, 4.0, rng, size=100000)
    corr = np.corrcoef(values.T)
    off_diag = corr[~np.eye(7, dtype=bool)]
    assert np.all(np.abs(off_diag - rho) < 0.01)
    assert values.std(axis=0) == pytest.approx(np.full(7, 4.0), abs=0.05)


def test_shadowing_determinism():
    a = sample_shadowing(5, 0.6, 4.0, np.random.default_rng(77)).values_db
    b = sample_shadowing(5, 0.6, 4.0, np.random.default_rng(77)).values_db
    np.testing.assert_array_equal(a, b)


# --- path loss ---------------------------------------------------------------

def test_path_loss_values():
    assert path_loss_db(10.0, True, 2.0) == pytest.approx(
        22.0 + 28.0 + 20.0 * math.log10(2.0), rel=1e-12)
    assert path_loss_db(10.0, True, 2.0) == pytest.approx(56.02, abs=0.01)
    assert path_loss_db(100.0, False, 2.0) == pytest.approx(103.93, abs=0.01)


def test_path_loss_nlos_exceeds_los():
    # The intercepts cross just below 1.8 m; everywhere the simulator can
    # place a link (3-D distance above ~1.9 m) NLOS is the lossier state.
    for d in (2.0, 10.0, 100.0, 500.0):
        assert path_loss_db(d, False, 2.0) > path_loss_db(d, True, 2.0)


def test_path_loss_monotone_in_distance():
    d = np.linspace(1.0, 500.0, 1000)
    for los in (True, False):
        pl = path_loss_db(d, np.full(d.shape, los), 2.0)
        assert np.all(np.diff(pl) > 0)
        assert np.all(pl > 0)


def test_path_loss_rejects_below_exclusion_radius():
    with pytest.raises(ValueError):
        path_loss_db(0.5, True, 2.0)


def test_path_loss_custom_coefficients():
    pl = path_loss_db(10.0, True, 2.0, los_coeffs=(20.0, 30.0, 10.0))
    assert pl == pytest.approx(20.0 + 30.0 + 10.0 * math.log10(2.0))


# --- antenna pattern ---------------------------------------------------------

def test_antenna_cell_edge_gets_minus_3db():
    # The beam geometry aims the -3 dB ray at the cell-edge ground point.
    alpha = 8.045
    for isd in (20.0, 70.0, 200.0):
        h_bs = isd / math.sqrt(3) * math.tan(math.radians(alpha)) + 1.5
        pattern = AntennaPattern.from_beam_geometry(alpha)
        edge = isd / math.sqrt(3)
        gain = antenna_gain_db(h_bs, 1.5, edge, pattern)
        assert gain == pytest.approx(pattern.gain_max_dbi - 3.0, abs=1e-9)


def test_antenna_boresight_gets_max_gain():
    pattern = AntennaPattern.from_beam_geometry(8.045)
    h_bs, h_ue = 5.0, 1.5
    d = (h_bs - h_ue) / math.tan(math.radians(pattern.tilt_deg))
    assert antenna_gain_db(h_bs, h_ue, d, pattern) == pytest.approx(
        pattern.gain_max_dbi, abs=1e-9)


def test_antenna_sidelobe_floor():
    pattern = AntennaPattern.from_beam_geometry(8.045)
    # Directly below the antenna the depression angle is ~90 degrees.
    gain = antenna_gain_db(50.0, 1.5, 1.0, pattern)
    assert gain == pytest.approx(pattern.gain_max_dbi - pattern.sla_db)


def test_antenna_overrides():
    pattern = AntennaPattern.from_beam_geometry(8.045, gain_max_dbi=8.0,
                                                tilt_deg=10.0,
                                                beamwidth_deg=20.0)
    assert pattern.tilt_deg == 10.0
    assert pattern.beamwidth_deg == 20.0
    h_bs, h_ue = 5.0, 1.5
    d = (h_bs - h_ue) / math.tan(math.radians(20.0))
    assert antenna_gain_db(h_bs, h_ue, d, pattern) == pytest.approx(
        8.0 - 12.0 * ((20.0 - 10.0) / 20.0) ** 2)
