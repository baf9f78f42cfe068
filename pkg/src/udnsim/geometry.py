"""Hexagonal BS layout, ISD-dependent antenna height, and uniform UE drops.

The lattice is oriented with nearest-neighbor BSs at 30, 90, ..., 330 degrees,
so the serving cell's Voronoi region is a flat-top hexagon with a vertex on
the +x axis (circumradius ISD/sqrt(3), apothem ISD/2). Every point strictly
inside that hexagon is closer to the serving BS than to any interferer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ConfigError

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Layout:
    """Multi-tier hexagonal BS deployment, serving BS at the origin."""

    bs_positions: np.ndarray  # (n_bs, 2), meters
    bs_height_m: float        # common to all BSs
    serving_index: int
    isd_m: float
    n_tiers: int

    @property
    def n_bs(self) -> int:
        return len(self.bs_positions)

    @property
    def cell_radius_m(self) -> float:
        """Circumradius of the serving cell's hexagon."""
        return self.isd_m / SQRT3


@dataclass(frozen=True)
class UeDrop:
    """UE positions dropped uniformly inside the serving cell."""

    positions: np.ndarray  # (n_ue, 2), meters
    ue_height_m: float


def hex_grid_size(n_tiers: int) -> int:
    """BS count of a hex grid with the given number of surrounding tiers."""
    return 1 + 3 * n_tiers * (n_tiers + 1)


def build_hex_grid(isd_m: float, n_tiers: int,
                   bs_height_m: float | None = None,
                   alpha_deg: float = 8.045,
                   h_ue_m: float = 1.5) -> Layout:
    """Build the hex lattice: serving BS first, then tier by tier.

    Tier t contributes 6t BSs at nearest-neighbor spacing exactly isd_m.
    Heights default to the beam-geometry rule of bs_antenna_height().
    """
    if isd_m <= 0:
        raise ConfigError("isd_m: must be > 0")
    if n_tiers < 0:
        raise ConfigError("n_tiers: must be >= 0")
    # Lattice basis at 30 and 90 degrees; all six neighbors land on
    # 30 + 60k degrees, leaving a hexagon vertex on the +x axis.
    a1 = np.array([isd_m * SQRT3 / 2.0, isd_m / 2.0])
    a2 = np.array([0.0, isd_m])
    points = [np.zeros(2)]
    for tier in range(1, n_tiers + 1):
        # Walk the ring: start at tier*a1, take `tier` steps along each of
        # the six edge directions of the hex ring.
        corner_steps = [a2 - a1, -a1, -a2, a1 - a2, a1, a2]
        pos = tier * a1
        for step in corner_steps:
            for _ in range(tier):
                points.append(pos.copy())
                pos = pos + step
    positions = np.array(points)
    if bs_height_m is None:
        bs_height_m = bs_antenna_height(isd_m, alpha_deg, h_ue_m)
    return Layout(bs_positions=positions, bs_height_m=bs_height_m,
                  serving_index=0, isd_m=isd_m, n_tiers=n_tiers)


def bs_antenna_height(isd_m: float, alpha_deg: float, h_ue_m: float) -> float:
    """BS height placing the -3 dB beam edge on the cell-edge ground point.

    The beam ray that makes angle alpha with the horizontal must reach the
    cell edge at distance ISD/sqrt(3), so the antenna sits at
    ISD/sqrt(3) * tan(alpha) above UE height.
    """
    if isd_m < 0:
        raise ConfigError("isd_m: must be >= 0")
    if not 0 < alpha_deg < 90:
        raise ConfigError("alpha_deg: must be in (0, 90)")
    return isd_m / SQRT3 * math.tan(math.radians(alpha_deg)) + h_ue_m


def in_central_hexagon(xy: np.ndarray, isd_m: float) -> np.ndarray:
    """Membership test for the serving cell's hexagon (vertex on +x axis).

    A point is inside iff its projection on each of the three edge normals
    (30, 90, 150 degrees) stays within the apothem ISD/2.
    """
    xy = np.atleast_2d(xy)
    apothem = isd_m / 2.0
    inside = np.ones(len(xy), dtype=bool)
    for angle in (30.0, 90.0, 150.0):
        normal = np.array([math.cos(math.radians(angle)),
                           math.sin(math.radians(angle))])
        inside &= np.abs(xy @ normal) <= apothem + 1e-12
    return inside


def drop_ues(layout: Layout, n_ue: int, rng: np.random.Generator,
             ue_height_m: float = 1.5, min_dist_m: float = 1.0) -> UeDrop:
    """Drop n_ue UEs uniformly in the serving cell via rejection sampling.

    Points come from the hexagon's bounding box and are redrawn until they
    fall inside the hexagon and outside the exclusion radius around the BS.
    Deterministic given the generator state.
    """
    if n_ue < 0:
        raise ConfigError("n_ue: must be >= 0")
    radius = layout.cell_radius_m
    apothem = layout.isd_m / 2.0
    points = np.empty((n_ue, 2))
    for i in range(n_ue):
        while True:
            x = rng.uniform(-radius, radius)
            y = rng.uniform(-apothem, apothem)
            p = np.array([x, y])
            if not in_central_hexagon(p, layout.isd_m)[0]:
                continue
            if x * x + y * y < min_dist_m * min_dist_m:
                continue
            points[i] = p
            break
    return UeDrop(positions=points, ue_height_m=ue_height_m)
