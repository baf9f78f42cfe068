"""Monte-Carlo drop orchestration: geometry, channels, scheduling, rates.

Randomness policy: every random stream is keyed by
(master_seed, drop_index, purpose, ue_index). Drops are therefore
independent of execution order and worker count, and campaigns that share
a master seed reuse identical channel realizations wherever shapes allow
(common random numbers across scheduler and fading-model sweeps).
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from . import geometry, channel, link, schedulers, stats
from .config import ConfigError, ScenarioConfig, SWEEP_AXES

# Stream purposes inside one drop.
_PURPOSE_POSITION = 0
_PURPOSE_LOS = 1
_PURPOSE_SHADOW = 2
_PURPOSE_FADING = 3

COLD_START_RATE_BPS = float(link.per_rb_rate_bps(1.0))  # one RB at 0 dB SINR


def substream(master_seed: int, drop_index: int, purpose: int,
              ue_index: int) -> np.random.Generator:
    """Deterministically derived generator for one (drop, purpose, UE)."""
    seq = np.random.SeedSequence(entropy=master_seed,
                                 spawn_key=(drop_index, purpose, ue_index))
    return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class DropTrace:
    """Optional per-drop debugging payload."""

    allocations: np.ndarray  # (n_subframes, n_rb) UE index or -1
    sinr: np.ndarray         # (n_subframes, n_ue, n_rb) linear
    ue_positions: np.ndarray


@dataclass(frozen=True)
class DropResult:
    """Throughput statistics of one Monte-Carlo drop."""

    drop_index: int
    per_ue_throughput_bps: np.ndarray  # (n_ue,), subframe average
    cell_throughput_bps: float
    per_ue_mean_sinr_db: np.ndarray    # (n_ue,), dB of RB/subframe-mean SINR
    trace: DropTrace | None = None


@dataclass(frozen=True)
class CampaignResult:
    """A campaign's drops plus the aggregates reports are built from."""

    config: ScenarioConfig
    drops: tuple[DropResult, ...]
    mean_cell_tput_bps: float
    mean_ue_tput_bps: float
    p05_ue_tput_bps: float
    p50_ue_tput_bps: float

    @classmethod
    def from_drops(cls, config: ScenarioConfig,
                   drops: list[DropResult]) -> "CampaignResult":
        cell = np.array([d.cell_throughput_bps for d in drops])
        per_drop_ue_mean = np.array([d.per_ue_throughput_bps.mean()
                                     for d in drops])
        samples = cls._pool(drops, "per_ue_throughput_bps")
        cdf = stats.build_cdf(samples)
        return cls(config=config, drops=tuple(drops),
                   mean_cell_tput_bps=float(cell.mean()),
                   mean_ue_tput_bps=float(per_drop_ue_mean.mean()),
                   p05_ue_tput_bps=stats.percentile(cdf, 0.05),
                   p50_ue_tput_bps=stats.percentile(cdf, 0.50))

    @staticmethod
    def _pool(drops, attr: str) -> np.ndarray:
        return np.concatenate([getattr(d, attr) for d in drops])

    @property
    def ue_tput_samples(self) -> np.ndarray:
        """Per-UE per-drop throughput pool, drop-major order."""
        return self._pool(self.drops, "per_ue_throughput_bps")

    @property
    def ue_sinr_db_samples(self) -> np.ndarray:
        return self._pool(self.drops, "per_ue_mean_sinr_db")

    def metric(self, name: str) -> float:
        try:
            return getattr(self, name)
        except AttributeError:
            raise KeyError(f"unknown metric {name!r}")


def run_drop(config: ScenarioConfig, drop_index: int,
             collect_trace: bool = False) -> DropResult:
    """Run one drop: place UEs, realize channels, schedule every subframe."""
    cfg = config
    layout = geometry.build_hex_grid(cfg.isd_m, cfg.n_tiers,
                                     alpha_deg=cfg.alpha_deg,
                                     h_ue_m=cfg.h_ue_m)
    n_ue, n_bs = cfg.n_ue, layout.n_bs
    n_sf, n_rb = cfg.n_subframes, cfg.n_rb

    positions = np.vstack([
        geometry.drop_ues(
            layout, 1,
            substream(cfg.master_seed, drop_index, _PURPOSE_POSITION, u),
            ue_height_m=cfg.h_ue_m,
            min_dist_m=cfg.min_ue_bs_dist_m).positions
        for u in range(n_ue)
    ])

    d2d = np.linalg.norm(positions[:, None, :] - layout.bs_positions[None, :, :],
                         axis=2)
    height_gap = layout.bs_height_m - cfg.h_ue_m
    d3d = np.sqrt(d2d ** 2 + height_gap ** 2)

    los = np.vstack([
        substream(cfg.master_seed, drop_index, _PURPOSE_LOS, u).uniform(size=n_bs)
        < channel.p_los(d2d[u])
        for u in range(n_ue)
    ])
    pl_db = channel.path_loss_db(d3d, los, cfg.carrier_ghz,
                                 los_coeffs=cfg.pl_los_coeffs,
                                 nlos_coeffs=cfg.pl_nlos_coeffs)
    pattern = channel.AntennaPattern.from_beam_geometry(
        cfg.alpha_deg, gain_max_dbi=cfg.ant_gain_max_dbi,
        sla_db=cfg.ant_sla_db, tilt_deg=cfg.ant_tilt_deg,
        beamwidth_deg=cfg.ant_beamwidth_deg)
    ant_db = channel.antenna_gain_db(layout.bs_height_m, cfg.h_ue_m, d2d, pattern)

    rho = channel.shadow_cross_correlation(cfg.isd_m, cfg.d_cor_m)
    shadow_db = np.vstack([
        channel.sample_shadowing(
            n_bs, rho, cfg.shadow_sigma_db,
            substream(cfg.master_seed, drop_index, _PURPOSE_SHADOW, u)).values_db
        for u in range(n_ue)
    ])

    gain = 10.0 ** ((ant_db - pl_db + shadow_db) / 10.0)
    k = channel.rician_k(d2d) if cfg.fading_model == "rician" \
        else np.zeros_like(d2d)

    # Fading drawn per UE with BS-major layout so that adding UEs or tiers
    # leaves existing streams untouched (common random numbers).
    fading = np.empty((n_sf, n_ue, n_bs, n_rb))
    for u in range(n_ue):
        rng = substream(cfg.master_seed, drop_index, _PURPOSE_FADING, u)
        per_bs = channel.sample_fading_power(k[u][:, None, None], rng,
                                             size=(n_bs, n_sf, n_rb))
        fading[:, u] = np.moveaxis(per_bs, 0, 1)

    budget = link.PowerBudget.from_config(cfg.tx_power_dbm, n_rb,
                                          cfg.noise_figure_db)
    sinr = link.sinr_grid(gain, fading, layout.serving_index, budget)
    rates_rb = link.per_rb_rate_bps(sinr, cfg.eta_max)
    wideband = rates_rb.sum(axis=-1)  # (n_sf, n_ue)

    scheduler = schedulers.make_scheduler(cfg.scheduler, cfg.n_max())
    past_avg = np.full(n_ue, COLD_START_RATE_BPS)
    total_rate = np.zeros(n_ue)
    rb_index = np.arange(n_rb)
    alloc_trace = np.empty((n_sf, n_rb), dtype=int) if collect_trace else None

    for t in range(n_sf):
        alloc = scheduler.allocate(t, sinr[t], wideband[t], past_avg)
        rb_to_ue = alloc.rb_to_ue
        served = np.zeros(n_ue)
        mask = rb_to_ue >= 0
        np.add.at(served, rb_to_ue[mask], rates_rb[t, rb_to_ue[mask],
                                                   rb_index[mask]])
        total_rate += served
        past_avg = schedulers.update_avg(past_avg, served, cfg.t_c)
        if collect_trace:
            alloc_trace[t] = rb_to_ue

    per_ue_tput = total_rate / n_sf
    mean_sinr_db = 10.0 * np.log10(sinr.mean(axis=(0, 2)))
    trace = DropTrace(allocations=alloc_trace, sinr=sinr,
                      ue_positions=positions) if collect_trace else None
    return DropResult(drop_index=drop_index,
                      per_ue_throughput_bps=per_ue_tput,
                      cell_throughput_bps=float(per_ue_tput.sum()),
                      per_ue_mean_sinr_db=mean_sinr_db,
                      trace=trace)


def _drop_task(args) -> DropResult:
    config, drop_index = args
    return run_drop(config, drop_index)


def run_campaign(config: ScenarioConfig, n_workers: int = 1) -> CampaignResult:
    """Run config.n_drops independent drops and aggregate.

    Results are keyed by drop index, so the output is identical for any
    worker count.
    """
    config.validate()
    tasks = [(config, i) for i in range(config.n_drops)]
    if n_workers <= 1 or config.n_drops == 1:
        drops = [run_drop(config, i) for i in range(config.n_drops)]
    else:
        with multiprocessing.Pool(processes=n_workers) as pool:
            drops = pool.map(_drop_task, tasks)
    return CampaignResult.from_drops(config, drops)


def run_sweep(base_config: ScenarioConfig, axis: str, values,
              n_workers: int = 1) -> list[CampaignResult]:
    """One campaign per value of a single swept axis, shared master seed.

    Sharing the seed pairs the campaigns through common random numbers:
    scheduler and fading-model sweeps see identical channel realizations.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"axis: unknown sweep axis {axis!r}, "
                          f"choose from {sorted(SWEEP_AXES)}")
    field_name = SWEEP_AXES[axis]
    return [run_campaign(base_config.replace(**{field_name: v}), n_workers)
            for v in values]
