"""Proportional-fair and round-robin schedulers behind one interface.

All variants map (subframe index, per-UE/RB SINR grid, rate-tracker state)
to an allocation of RBs. Tie-breaking everywhere is deterministic: lower
past average rate first, then lower UE index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .link import per_rb_rate_bps

UNALLOCATED = -1


@dataclass(frozen=True)
class AllocationMap:
    """Per-RB UE assignment for one subframe; UNALLOCATED marks idle RBs."""

    rb_to_ue: np.ndarray  # (n_rb,), int

    def rb_counts(self, n_ue: int) -> np.ndarray:
        assigned = self.rb_to_ue[self.rb_to_ue >= 0]
        return np.bincount(assigned, minlength=n_ue)


def default_n_max(n_ue: int) -> int:
    """Candidate-set size rule: half the UEs, rounded up, at least one."""
    return max(1, math.ceil(n_ue / 2))


def td_metric(wideband_rate: np.ndarray, past_avg_rate: np.ndarray) -> np.ndarray:
    """Time-domain priority: potential instantaneous over past average rate.

    A zero past average counts as infinite priority (cold start).
    """
    wideband_rate = np.asarray(wideband_rate, dtype=float)
    past_avg_rate = np.asarray(past_avg_rate, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        metric = np.where(past_avg_rate > 0.0,
                          wideband_rate / past_avg_rate, np.inf)
    return metric


def select_td(metrics: np.ndarray, past_avg_rate: np.ndarray,
              n_max: int) -> np.ndarray:
    """Pick the n_max highest-priority UEs, in priority order."""
    metrics = np.asarray(metrics, dtype=float)
    n_ue = len(metrics)
    order = np.lexsort((np.arange(n_ue), past_avg_rate, -metrics))
    return order[:min(n_max, n_ue)]


def update_avg(r_prev, r_now, t_c: float):
    """Moving-average rate update: (1 - 1/T_c)*prev + (1/T_c)*now.

    Non-served UEs contribute r_now = 0.
    """
    inv = 1.0 / t_c
    return (1.0 - inv) * np.asarray(r_prev, dtype=float) \
        + inv * np.asarray(r_now, dtype=float)


def wideband_estimate(sinr_rows: np.ndarray, eta_max: float = 5.55) -> np.ndarray:
    """Full-band achievable rate per UE at the current subframe's SINRs."""
    return per_rb_rate_bps(sinr_rows, eta_max).sum(axis=-1)


def fd_metric(sinr: np.ndarray) -> np.ndarray:
    """Frequency-domain priority: per-RB SINR over the UE's full-band sum.

    Scale-free per UE: multiplying a row by a constant leaves it unchanged.
    """
    sinr = np.asarray(sinr, dtype=float)
    return sinr / sinr.sum(axis=-1, keepdims=True)


def pf_fd_allocate(candidates: np.ndarray, sinr: np.ndarray,
                   past_avg_rate: np.ndarray) -> AllocationMap:
    """Assign each RB to the candidate with the highest normalized SINR."""
    candidates = np.asarray(candidates, dtype=int)
    n_rb = sinr.shape[-1]
    # Priority order for exact ties: lower past average, then lower index.
    prio = candidates[np.lexsort((candidates, past_avg_rate[candidates]))]
    metric = fd_metric(sinr[prio])
    winners = prio[np.argmax(metric, axis=0)]
    return AllocationMap(rb_to_ue=winners.astype(int))


def _equal_split(members: np.ndarray, n_rb: int, t: int) -> np.ndarray:
    """Contiguous equal split of the band among members (in index order).

    The n_rb % len(members) leftover RBs rotate across subframes: member at
    list position p gets one extra RB when (p - t) mod len(members) falls in
    the remainder window.
    """
    members = np.sort(np.asarray(members, dtype=int))
    n = len(members)
    base, extra = divmod(n_rb, n)
    sizes = base + (((np.arange(n) - t) % n) < extra).astype(int)
    return np.repeat(members, sizes)


def rr_allocate(variant: int, n_ue: int, n_rb: int, t: int,
                td_metrics: np.ndarray | None = None,
                past_avg_rate: np.ndarray | None = None,
                n_max: int | None = None) -> AllocationMap:
    """The four round-robin flavors.

    1: one UE at a time, cycling with the subframe index, whole band.
    2: band equally divided among all UEs, leftover RBs rotating.
    3: whole band to the single top time-domain-priority UE.
    4: band equally divided among the n_max top-priority UEs.
    """
    if n_ue < 1:
        raise ValueError("rr_allocate needs at least one UE")
    if variant == 1:
        rb_to_ue = np.full(n_rb, t % n_ue, dtype=int)
    elif variant == 2:
        rb_to_ue = _pad(_equal_split(np.arange(n_ue), n_rb, t), n_rb)
    elif variant == 3:
        winner = select_td(td_metrics, past_avg_rate, 1)[0]
        rb_to_ue = np.full(n_rb, winner, dtype=int)
    elif variant == 4:
        chosen = select_td(td_metrics, past_avg_rate, n_max)
        rb_to_ue = _pad(_equal_split(chosen, n_rb, t), n_rb)
    else:
        raise ValueError(f"unknown round-robin variant {variant}")
    return AllocationMap(rb_to_ue=rb_to_ue)


def _pad(assigned: np.ndarray, n_rb: int) -> np.ndarray:
    if len(assigned) == n_rb:
        return assigned.astype(int)
    out = np.full(n_rb, UNALLOCATED, dtype=int)
    out[:len(assigned)] = assigned
    return out


class PfScheduler:
    """Two-stage proportional fair: time-domain gating, per-RB selection."""

    name = "pf"

    def __init__(self, n_max: int):
        self.n_max = n_max

    def allocate(self, t: int, sinr: np.ndarray, wideband_rate: np.ndarray,
                 past_avg_rate: np.ndarray) -> AllocationMap:
        metrics = td_metric(wideband_rate, past_avg_rate)
        candidates = select_td(metrics, past_avg_rate, self.n_max)
        return pf_fd_allocate(candidates, sinr, past_avg_rate)


class RoundRobinScheduler:
    """Round-robin variants 1-4 behind the common allocate() signature."""

    def __init__(self, variant: int, n_max: int):
        if variant not in (1, 2, 3, 4):
            raise ValueError(f"unknown round-robin variant {variant}")
        self.variant = variant
        self.n_max = n_max
        self.name = f"rr{variant}"

    def allocate(self, t: int, sinr: np.ndarray, wideband_rate: np.ndarray,
                 past_avg_rate: np.ndarray) -> AllocationMap:
        n_ue, n_rb = sinr.shape
        metrics = None
        if self.variant in (3, 4):
            metrics = td_metric(wideband_rate, past_avg_rate)
        return rr_allocate(self.variant, n_ue, n_rb, t,
                           td_metrics=metrics, past_avg_rate=past_avg_rate,
                           n_max=self.n_max)


def make_scheduler(name: str, n_max: int):
    if name == "pf":
        return PfScheduler(n_max)
    if name.startswith("rr") and name[2:] in ("1", "2", "3", "4"):
        return RoundRobinScheduler(int(name[2:]), n_max)
    raise ValueError(f"unknown scheduler {name!r}")
