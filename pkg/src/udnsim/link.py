"""Per-RB SINR and the SINR-to-rate map, plus the power/noise budget."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import LinkState
from .config import RB_BANDWIDTH_HZ

THERMAL_NOISE_DBM_PER_HZ = -174.0


@dataclass(frozen=True)
class PowerBudget:
    """Transmit and noise powers per resource block."""

    bs_tx_power_dbm: float
    per_rb_power_dbm: float
    noise_figure_db: float
    noise_per_rb_dbm: float

    @classmethod
    def from_config(cls, tx_power_dbm: float, n_rb: int,
                    noise_figure_db: float) -> "PowerBudget":
        per_rb = tx_power_dbm - 10.0 * math.log10(n_rb)
        noise = (THERMAL_NOISE_DBM_PER_HZ
                 + 10.0 * math.log10(RB_BANDWIDTH_HZ) + noise_figure_db)
        return cls(bs_tx_power_dbm=tx_power_dbm, per_rb_power_dbm=per_rb,
                   noise_figure_db=noise_figure_db, noise_per_rb_dbm=noise)

    @property
    def per_rb_power_mw(self) -> float:
        return 10.0 ** (self.per_rb_power_dbm / 10.0)

    @property
    def noise_per_rb_mw(self) -> float:
        return 10.0 ** (self.noise_per_rb_dbm / 10.0)


def compute_sinr(links: Sequence[LinkState], fading: Sequence[float],
                 serving_index: int, budget: PowerBudget) -> float:
    """SINR of one UE on one RB from its per-BS link states.

    Linear ratio P*h_serving / (sum_{j != serving} P*h_j + N0), where each
    h is the product of antenna, path-loss, shadowing, and fast-fading
    gains. All BSs transmit at the same per-RB power (full-buffer
    interferers).
    """
    p = budget.per_rb_power_mw
    received = [p * link.large_scale_gain_linear() * fade
                for link, fade in zip(links, fading)]
    signal = received[serving_index]
    interference = sum(received) - signal
    return signal / (interference + budget.noise_per_rb_mw)


def sinr_grid(large_scale_gain: np.ndarray, fading_power: np.ndarray,
              serving_index: int, budget: PowerBudget) -> np.ndarray:
    """Vectorized SINR over (..., n_ue, n_bs, n_rb) fading samples.

    large_scale_gain is (n_ue, n_bs) linear; fading_power carries the
    per-RB axis (and optionally a leading subframe axis). Returns the
    linear SINR with the BS axis reduced.
    """
    received = large_scale_gain[..., :, :, None] * fading_power
    signal = received[..., :, serving_index, :]
    interference = received.sum(axis=-2) - signal
    p = budget.per_rb_power_mw
    return p * signal / (p * interference + budget.noise_per_rb_mw)


def per_rb_rate_bps(sinr: np.ndarray, eta_max: float = 5.55) -> np.ndarray:
    """Achievable rate per RB: 180 kHz * min(log2(1 + SINR), eta_max)."""
    eff = np.minimum(np.log2(1.0 + np.asarray(sinr, dtype=float)), eta_max)
    return RB_BANDWIDTH_HZ * eff


def rate_bps(sinr_per_allocated_rb, eta_max: float = 5.55) -> float:
    """Total rate over an allocation; empty allocations carry zero rate."""
    sinr = np.asarray(sinr_per_allocated_rb, dtype=float)
    if sinr.size == 0:
        return 0.0
    return float(per_rb_rate_bps(sinr, eta_max).sum())
