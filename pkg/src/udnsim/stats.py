"""Campaign post-processing: CDFs, percentiles, gain ratios, CSV reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

METRICS = ("mean_cell_tput_bps", "mean_ue_tput_bps",
           "p05_ue_tput_bps", "p50_ue_tput_bps")

# Config fields a comparison is allowed to differ on.
COMPARISON_AXES = ("isd_m", "n_ue", "scheduler", "fading_model", "n_tiers")

CAMPAIGN_COLUMNS = ("drop_id", "ue_id", "isd_m", "n_ue", "scheduler",
                    "fading_model", "mean_sinr_db", "throughput_bps")
SUMMARY_COLUMNS = ("isd_m", "n_ue", "scheduler", "fading_model", "n_drops",
                   "mean_cell_tput_bps", "mean_ue_tput_bps",
                   "p05_ue_tput_bps", "p50_ue_tput_bps")
GAIN_COLUMNS = ("isd_m", "n_ue", "metric_name", "baseline_value",
                "comparison_value", "ratio")


@dataclass(frozen=True)
class Cdf:
    """Empirical CDF: sorted values with cumulative probability i/n."""

    values: np.ndarray
    probabilities: np.ndarray


def build_cdf(samples) -> Cdf:
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("cannot build a CDF from zero samples")
    values = np.sort(samples)
    n = len(values)
    probs = np.arange(1, n + 1) / n
    return Cdf(values=values, probabilities=probs)


def percentile(cdf: Cdf, p: float) -> float:
    """Smallest sample value whose cumulative probability reaches p."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    index = int(np.searchsorted(cdf.probabilities, p, side="left"))
    return float(cdf.values[index])


@dataclass(frozen=True)
class GainRow:
    isd_m: float
    n_ue: int
    metric_name: str
    baseline_value: float
    comparison_value: float

    @property
    def ratio(self) -> float:
        return self.comparison_value / self.baseline_value


def gain_ratio(baseline, comparison, metric: str) -> float:
    """comparison/baseline for a named metric of two paired campaigns.

    The two configs may differ only on the standard comparison axes;
    any other mismatch (seeds, drop counts, channel knobs) is an error.
    """
    if metric not in METRICS:
        raise KeyError(f"unknown metric {metric!r}, choose from {METRICS}")
    _check_paired(baseline.config, comparison.config)
    return comparison.metric(metric) / baseline.metric(metric)


def _check_paired(cfg_a, cfg_b) -> None:
    for f in fields(cfg_a):
        if f.name in COMPARISON_AXES:
            continue
        if getattr(cfg_a, f.name) != getattr(cfg_b, f.name):
            raise ValueError(
                f"campaigns differ on unpaired field {f.name!r}: "
                f"{getattr(cfg_a, f.name)!r} vs {getattr(cfg_b, f.name)!r}")


# --- CSV reports -------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def campaign_rows(campaign) -> list[tuple]:
    cfg = campaign.config
    rows = []
    for drop in campaign.drops:
        for ue in range(cfg.n_ue):
            rows.append((drop.drop_index, ue, cfg.isd_m, cfg.n_ue,
                         cfg.scheduler, cfg.fading_model,
                         float(drop.per_ue_mean_sinr_db[ue]),
                         float(drop.per_ue_throughput_bps[ue])))
    return rows


def write_campaign_csv(path, campaigns) -> None:
    """One row per drop per UE, concatenated over the given campaigns."""
    rows = []
    for campaign in campaigns:
        rows.extend(campaign_rows(campaign))
    _write_rows(path, CAMPAIGN_COLUMNS, rows)


def summary_row(campaign) -> tuple:
    cfg = campaign.config
    return (cfg.isd_m, cfg.n_ue, cfg.scheduler, cfg.fading_model,
            cfg.n_drops, campaign.mean_cell_tput_bps,
            campaign.mean_ue_tput_bps, campaign.p05_ue_tput_bps,
            campaign.p50_ue_tput_bps)


def write_summary_csv(path, campaigns) -> None:
    """One row per campaign."""
    _write_rows(path, SUMMARY_COLUMNS, [summary_row(c) for c in campaigns])


def write_cdf_csv(path, cdf: Cdf) -> None:
    _write_rows(path, ("value", "cumulative_probability"),
                zip(cdf.values, cdf.probabilities))


def write_gain_table_csv(path, rows: Sequence[GainRow]) -> None:
    _write_rows(path, GAIN_COLUMNS,
                [(r.isd_m, r.n_ue, r.metric_name, r.baseline_value,
                  r.comparison_value, r.ratio) for r in rows])


def pair_gain_rows(campaigns, axis: str, baseline_value, comparison_value,
                   metric: str) -> list[GainRow]:
    """Pair campaigns that differ only in `axis` and tabulate the ratios."""
    def key(c):
        cfg = c.config
        return tuple(getattr(cfg, f.name) for f in fields(cfg)
                     if f.name != axis)

    baselines = {key(c): c for c in campaigns
                 if getattr(c.config, axis) == baseline_value}
    rows = []
    for c in campaigns:
        if getattr(c.config, axis) != comparison_value:
            continue
        base = baselines.get(key(c))
        if base is None:
            continue
        rows.append(GainRow(isd_m=c.config.isd_m, n_ue=c.config.n_ue,
                            metric_name=metric,
                            baseline_value=base.metric(metric),
                            comparison_value=c.metric(metric)))
    return rows


# --- reconstruction from stored campaign.csv ---------------------------------

@dataclass(frozen=True)
class StoredCampaign:
    """Per-UE samples re-read from a campaign.csv, grouped by config axes."""

    isd_m: float
    n_ue: int
    scheduler: str
    fading_model: str
    n_drops: int
    ue_tput_samples: np.ndarray       # drop-major
    ue_sinr_db_samples: np.ndarray
    cell_tput_per_drop: np.ndarray

    @property
    def mean_cell_tput_bps(self) -> float:
        return float(self.cell_tput_per_drop.mean())

    @property
    def mean_ue_tput_bps(self) -> float:
        per_drop = self.ue_tput_samples.reshape(self.n_drops, self.n_ue)
        return float(per_drop.mean(axis=1).mean())

    @property
    def p05_ue_tput_bps(self) -> float:
        return percentile(build_cdf(self.ue_tput_samples), 0.05)

    @property
    def p50_ue_tput_bps(self) -> float:
        return percentile(build_cdf(self.ue_tput_samples), 0.50)

    def metric(self, name: str) -> float:
        return getattr(self, name)


def read_campaign_csv(path) -> list[StoredCampaign]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CAMPAIGN_COLUMNS:
            raise ValueError(f"unexpected campaign.csv header: "
                             f"{reader.fieldnames}")
        rows = list(reader)
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        k = (float(row["isd_m"]), int(row["n_ue"]), row["scheduler"],
             row["fading_model"])
        groups.setdefault(k, []).append(row)
    stored = []
    for (isd, n_ue, sched, fading), grp in groups.items():
        grp.sort(key=lambda r: (int(r["drop_id"]), int(r["ue_id"])))
        tput = np.array([float(r["throughput_bps"]) for r in grp])
        sinr = np.array([float(r["mean_sinr_db"]) for r in grp])
        drop_ids = sorted({int(r["drop_id"]) for r in grp})
        n_drops = len(drop_ids)
        if len(grp) != n_drops * n_ue:
            raise ValueError("campaign.csv rows do not form complete drops")
        cell = tput.reshape(n_drops, n_ue).sum(axis=1)
        stored.append(StoredCampaign(
            isd_m=isd, n_ue=n_ue, scheduler=sched, fading_model=fading,
            n_drops=n_drops, ue_tput_samples=tput, ue_sinr_db_samples=sinr,
            cell_tput_per_drop=cell))
    return stored


def write_report(out_dir, stored: Sequence[StoredCampaign]) -> None:
    """Recompute summary + CDF files from stored per-UE samples."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    rows = [(s.isd_m, s.n_ue, s.scheduler, s.fading_model, s.n_drops,
             s.mean_cell_tput_bps, s.mean_ue_tput_bps,
             s.p05_ue_tput_bps, s.p50_ue_tput_bps) for s in stored]
    _write_rows(os.path.join(out_dir, "summary.csv"), SUMMARY_COLUMNS, rows)
    all_tput = np.concatenate([s.ue_tput_samples for s in stored])
    all_sinr = np.concatenate([s.ue_sinr_db_samples for s in stored])
    write_cdf_csv(os.path.join(out_dir, "cdf_ue_tput_bps.csv"),
                  build_cdf(all_tput))
    write_cdf_csv(os.path.join(out_dir, "cdf_ue_sinr_db.csv"),
                  build_cdf(all_sinr))
