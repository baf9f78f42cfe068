"""Hex layout, antenna height, and UE drop tests."""

import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from udnsim.config import ConfigError
from udnsim.geometry import (SQRT3, Layout, bs_antenna_height, build_hex_grid,
                             drop_ues, hex_grid_size, in_central_hexagon)


def test_grid_counts_per_tier():
    for n_tiers, expected in [(0, 1), (1, 7), (2, 19), (3, 37)]:
        layout = build_hex_grid(20.0, n_tiers)
        assert layout.n_bs == expected == hex_grid_size(n_tiers)


def test_grid_count_formula_general():
    for n_tiers in range(7):
        assert hex_grid_size(n_tiers) == 1 + 3 * n_tiers * (n_tiers + 1)
        assert build_hex_grid(35.0, n_tiers).n_bs == hex_grid_size(n_tiers)


def test_serving_bs_at_origin():
    layout = build_hex_grid(40.0, 2)
    assert layout.serving_index == 0
    np.testing.assert_allclose(layout.bs_positions[0], [0.0, 0.0])


def test_single_tier_interferers_at_exact_isd():
    layout = build_hex_grid(20.0, 1)
    dists = np.linalg.norm(layout.bs_positions[1:], axis=1)
    np.testing.assert_allclose(dists, 20.0, rtol=1e-12)


def test_pairwise_spacing_at_least_isd():
    layout = build_hex_grid(50.0, 3)
    pos = layout.bs_positions
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    dist[np.diag_indices(len(pos))] = np.inf
    assert dist.min() >= 50.0 - 1e-6


def test_three_tier_outermost_ring():
    # Brute-force lattice enumeration as the oracle for ring membership.
    layout = build_hex_grid(50.0, 3)
    assert layout.n_bs == 37
    dists = np.linalg.norm(layout.bs_positions[1:], axis=1)
    # Outermost corners sit on the lattice axes at 3 * isd.
    assert np.isclose(dists.max(), 150.0)
    a1 = np.array([50.0 * SQRT3 / 2, 25.0])
    corner = 3 * a1
    assert any(np.allclose(p, corner) for p in layout.bs_positions)


def test_brute_force_lattice_enumeration_matches():
    isd, n_tiers = 50.0, 3
    a1 = np.array([isd * SQRT3 / 2.0, isd / 2.0])
    a2 = np.array([0.0, isd])
    expected = set()
    for i in range(-5, 6):
        for j in range(-5, 6):
            if max(abs(i), abs(j), abs(i + j)) <= n_tiers:
                p = i * a1 + j * a2
                expected.add((round(p[0], 6), round(p[1], 6)))
    layout = build_hex_grid(isd, n_tiers)
    got = {(round(x, 6), round(y, 6)) for x, y in layout.bs_positions}
    assert got == expected


def test_grid_rejects_bad_isd():
    with pytest.raises(ConfigError):
        build_hex_grid(0.0, 1)
    with pytest.raises(ConfigError):
        build_hex_grid(-5.0, 1)


def test_antenna_height_examples():
    assert bs_antenna_height(1e-9, 8.045, 1.5) == pytest.approx(1.5, abs=1e-6)
    assert bs_antenna_height(20.0, 8.045, 1.5) == pytest.approx(
        20.0 / SQRT3 * math.tan(math.radians(8.045)) + 1.5, rel=1e-12)
    assert bs_antenna_height(20.0, 8.045, 1.5) == pytest.approx(3.13, abs=0.01)
    assert bs_antenna_height(150.0, 8.045, 1.5) == pytest.approx(13.74, abs=0.01)


def test_antenna_height_increases_with_isd():
    heights = [bs_antenna_height(isd, 8.045, 1.5)
               for isd in (10, 20, 40, 70, 150, 200)]
    assert all(b > a for a, b in zip(heights, heights[1:]))


def test_empty_drop():
    layout = build_hex_grid(40.0, 1)
    drop = drop_ues(layout, 0, np.random.default_rng(0))
    assert drop.positions.shape == (0, 2)


def test_drop_within_cell_radius_many_seeds():
    layout = build_hex_grid(40.0, 1)
    radius = 40.0 / SQRT3
    for seed in range(30):
        drop = drop_ues(layout, 10, np.random.default_rng(seed))
        dists = np.linalg.norm(drop.positions, axis=1)
        assert np.all(dists <= radius + 1e-9)
        assert np.all(dists >= 1.0)


def test_dropped_ues_closest_to_serving_bs():
    layout = build_hex_grid(30.0, 2)
    drop = drop_ues(layout, 200, np.random.default_rng(4))
    d = np.linalg.norm(drop.positions[:, None, :]
                       - layout.bs_positions[None, :, :], axis=2)
    assert np.all(np.argmin(d, axis=1) == layout.serving_index)


def test_drop_determinism():
    layout = build_hex_grid(40.0, 1)
    a = drop_ues(layout, 25, np.random.default_rng(123)).positions
    b = drop_ues(layout, 25, np.random.default_rng(123)).positions
    np.testing.assert_array_equal(a, b)


def test_drop_uniform_over_sextants():
    # Chi-square over the six 60-degree sectors at the 1% level.
    layout = build_hex_grid(40.0, 1)
    drop = drop_ues(layout, 1000, np.random.default_rng(99))
    angles = np.arctan2(drop.positions[:, 1], drop.positions[:, 0])
    sextant = ((angles + math.pi) // (math.pi / 3)).astype(int).clip(0, 5)
    counts = np.bincount(sextant, minlength=6)
    result = scipy_stats.chisquare(counts)
    assert result.pvalue > 0.01


def test_hexagon_membership_vertices_and_outside():
    isd = 40.0
    r = isd / SQRT3
    assert in_central_hexagon(np.array([[r, 0.0]]), isd)[0]
    assert in_central_hexagon(np.array([[r / 2, isd / 2]]), isd)[0]
    assert not in_central_hexagon(np.array([[r * 1.01, 0.0]]), isd)[0]
    assert not in_central_hexagon(np.array([[0.0, isd / 2 * 1.01]]), isd)[0]
