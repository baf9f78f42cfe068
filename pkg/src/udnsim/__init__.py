"""Deterministic system-level simulator for ultra-dense small-cell downlinks."""

from .config import ConfigError, ScenarioConfig, RB_BANDWIDTH_HZ
from .geometry import Layout, UeDrop, build_hex_grid, bs_antenna_height, drop_ues
from .channel import (AntennaPattern, LinkState, ShadowField, antenna_gain_db,
                      p_los, path_loss_db, rician_k, sample_fading_power,
                      sample_shadowing, shadow_cross_correlation)
from .link import PowerBudget, compute_sinr, rate_bps, sinr_grid
from .schedulers import (AllocationMap, make_scheduler, pf_fd_allocate,
                         rr_allocate, select_td, td_metric, update_avg,
                         wideband_estimate)
from .engine import CampaignResult, DropResult, run_campaign, run_drop, run_sweep
from .stats import Cdf, build_cdf, gain_ratio, percentile

__all__ = [
    "AllocationMap", "AntennaPattern", "CampaignResult", "Cdf", "ConfigError",
    "DropResult", "Layout", "LinkState", "PowerBudget", "RB_BANDWIDTH_HZ",
    "ScenarioConfig", "ShadowField", "UeDrop", "antenna_gain_db",
    "bs_antenna_height", "build_cdf", "build_hex_grid", "compute_sinr",
    "drop_ues", "gain_ratio", "make_scheduler", "p_los", "path_loss_db",
    "percentile", "pf_fd_allocate", "rate_bps", "rician_k", "rr_allocate",
    "run_campaign", "run_drop", "run_sweep", "sample_fading_power",
    "sample_shadowing", "select_td", "shadow_cross_correlation", "sinr_grid",
    "td_metric", "update_avg", "wideband_estimate",
]
