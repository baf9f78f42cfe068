"""Stochastic and deterministic channel components.

Distance conventions: LOS probability and the Rician K factor work on the
2-D ground distance; path loss takes the 3-D distance; the antenna pattern
takes the horizontal distance plus both heights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ArrayLike = float | np.ndarray


@dataclass(frozen=True)
class LinkState:
    """Large-scale state of one UE-BS link, fixed for a whole drop."""

    distance_2d_m: float
    distance_3d_m: float
    is_los: bool
    path_loss_db: float
    shadowing_db: float
    antenna_gain_db: float
    rician_k: float

    def large_scale_gain_linear(self) -> float:
        """Composite gain excluding fast fading, as a linear power ratio."""
        g_db = self.antenna_gain_db - self.path_loss_db + self.shadowing_db
        return 10.0 ** (g_db / 10.0)


@dataclass(frozen=True)
class ShadowField:
    """Correlated shadowing (dB) seen by one UE toward every BS."""

    values_db: np.ndarray
    sigma_db: float
    rho: float


@dataclass(frozen=True)
class AntennaPattern:
    """Elevation-only pattern: parabolic main lobe with a side-lobe floor.

    Gain at depression angle theta (degrees below horizontal):
        G(theta) = gain_max - min(12 * ((theta - tilt) / beamwidth)^2, sla)
    Omnidirectional in azimuth.
    """

    gain_max_dbi: float = 5.0
    sla_db: float = 20.0
    tilt_deg: float = 16.09
    beamwidth_deg: float = 16.09

    @classmethod
    def from_beam_geometry(cls, alpha_deg: float, gain_max_dbi: float = 5.0,
                           sla_db: float = 20.0,
                           tilt_deg: float | None = None,
                           beamwidth_deg: float | None = None) -> "AntennaPattern":
        """Derive tilt and beamwidth from the -3 dB beam-edge angle alpha.

        With beamwidth 2*alpha and boresight tilted to 2*alpha, the upper
        -3 dB ray sits exactly at depression alpha, i.e. on the ray that
        the antenna-height rule aims at the cell edge. A cell-edge UE then
        sees gain_max - 3 dB, and a UE on boresight sees gain_max.
        """
        if beamwidth_deg is None:
            beamwidth_deg = 2.0 * alpha_deg
        if tilt_deg is None:
            tilt_deg = alpha_deg + beamwidth_deg / 2.0
        return cls(gain_max_dbi=gain_max_dbi, sla_db=sla_db,
                   tilt_deg=tilt_deg, beamwidth_deg=beamwidth_deg)


def p_los(d_2d_m: ArrayLike) -> ArrayLike:
    """Line-of-sight probability vs ground distance (urban micro).

    min(18/d, 1) * (1 - exp(-d/36)) + exp(-d/36); equals 1 for d <= 18 m and
    decays smoothly to 0 beyond.
    """
    d = np.asarray(d_2d_m, dtype=float)
    with np.errstate(divide="ignore"):
        near = np.minimum(np.divide(18.0, d, out=np.full_like(d, np.inf),
                                    where=d > 0), 1.0)
    decay = np.exp(-d / 36.0)
    result = near * (1.0 - decay) + decay
    return float(result) if np.isscalar(d_2d_m) else result


def rician_k(d_2d_m: ArrayLike) -> ArrayLike:
    """Rician K factor (linear) vs ground distance.

    K = 32 inside the guaranteed-LOS zone (d < 18 m), then the exponential
    decay 140.10 * exp(-0.107 * d). The jump at exactly 18 m (32 vs ~20.4)
    is intentional; the two branches are calibrated independently.
    """
    d = np.asarray(d_2d_m, dtype=float)
    result = np.where(d < 18.0, 32.0, 140.10 * np.exp(-0.107 * d))
    return float(result) if np.isscalar(d_2d_m) else result


def sample_fading_power(k: ArrayLike, rng: np.random.Generator,
                        size=None) -> ArrayLike:
    """Draw unit-mean Rician fast-fading power gains.

    Amplitude = sqrt(k/(k+1)) * e^{j*phase} + sqrt(1/(k+1)) * Z with Z
    standard complex normal (total variance 1) and phase uniform; the
    returned value is |amplitude|^2. k = 0 gives Rayleigh (Exp(1) power).

    The number of random draws is independent of k, so paired runs that
    differ only in K factors consume identical streams.
    """
    k_arr = np.asarray(k, dtype=float)
    shape = k_arr.shape if size is None else size
    phase = rng.uniform(0.0, 2.0 * math.pi, size=shape)
    normals = rng.standard_normal((2,) + tuple(np.shape(phase)))
    re, im = normals[0], normals[1]
    los = np.sqrt(k_arr / (k_arr + 1.0))
    nlos = np.sqrt(1.0 / (k_arr + 1.0)) / math.sqrt(2.0)
    amp_re = los * np.cos(phase) + nlos * re
    amp_im = los * np.sin(phase) + nlos * im
    power = amp_re * amp_re + amp_im * amp_im
    if size is None and np.isscalar(k):
        return float(power)
    return power


def shadow_cross_correlation(isd_m: float, d_cor_m: float) -> float:
    """Cross-correlation of one UE's shadowing toward different BSs.

    min(sqrt(0.25 + exp(-2 * ISD / d_cor)), 1): fully correlated for
    co-located sites, approaching the conventional 0.5 floor as the
    inter-site distance grows.
    """
    if isd_m < 0:
        raise ValueError("isd_m must be >= 0")
    if d_cor_m <= 0:
        raise ValueError("d_cor_m must be > 0")
    return min(math.sqrt(0.25 + math.exp(-2.0 * isd_m / d_cor_m)), 1.0)


def sample_shadowing(n_bs: int, rho: float, sigma_db: float,
                     rng: np.random.Generator, size: int | None = None):
    """Equicorrelated lognormal shadowing (dB) for one UE toward n_bs BSs.

    s_j = sigma * (sqrt(rho) * Z0 + sqrt(1-rho) * Zj) with independent
    standard normals: marginal std sigma_db, pairwise correlation rho.
    With ``size`` set, returns (size, n_bs) independent fields.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must be in [0, 1]")
    if sigma_db < 0:
        raise ValueError("sigma_db must be >= 0")
    n_fields = 1 if size is None else size
    common = rng.standard_normal((n_fields, 1))
    private = rng.standard_normal((n_fields, n_bs))
    values = sigma_db * (math.sqrt(rho) * common
                         + math.sqrt(1.0 - rho) * private)
    if size is None:
        return ShadowField(values_db=values[0], sigma_db=sigma_db, rho=rho)
    return values


def path_loss_db(d_m: ArrayLike, is_los: ArrayLike, fc_ghz: float,
                 los_coeffs=(22.0, 28.0, 20.0),
                 nlos_coeffs=(36.7, 22.7, 26.0)) -> ArrayLike:
    """Urban-micro path loss in dB: a*log10(d) + b + c*log10(fc_GHz).

    Defaults are the LOS/NLOS street-level coefficients; both triplets are
    overridable. Distances below the 1 m exclusion radius are rejected.
    """
    d = np.asarray(d_m, dtype=float)
    if np.any(d < 1.0):
        raise ValueError("path loss undefined below the 1 m exclusion radius")
    log_d = np.log10(d)
    log_f = math.log10(fc_ghz)
    los_pl = los_coeffs[0] * log_d + los_coeffs[1] + los_coeffs[2] * log_f
    nlos_pl = nlos_coeffs[0] * log_d + nlos_coeffs[1] + nlos_coeffs[2] * log_f
    result = np.where(np.asarray(is_los, dtype=bool), los_pl, nlos_pl)
    return float(result) if np.isscalar(d_m) else result


def antenna_gain_db(bs_height_m: float, ue_height_m: float,
                    horizontal_distance_m: ArrayLike,
                    pattern: AntennaPattern) -> ArrayLike:
    """Elevation antenna gain toward a ground UE at the given distance."""
    d = np.asarray(horizontal_distance_m, dtype=float)
    theta = np.degrees(np.arctan2(bs_height_m - ue_height_m, d))
    off = (theta - pattern.tilt_deg) / pattern.beamwidth_deg
    attenuation = np.minimum(12.0 * off * off, pattern.sla_db)
    result = pattern.gain_max_dbi - attenuation
    return float(result) if np.isscalar(horizontal_distance_m) else result
