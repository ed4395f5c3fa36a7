"""Monte-Carlo independent-cascade simulator with coupled paired runs.

Each trial draws its coin stream from a seed derived from (master_seed,
trial index); a coin is a pure function of (trial seed, undirected edge,
attempt epoch). Because a target must be inactive to be attempted, each
undirected edge is attempted at most once per cascade, so the epoch is the
per-edge attempt counter and is always 0. Paired runs that share a master
seed therefore see identical coins on identical edges, which makes blocking
monotone: the blocked run's active set is a subset of the unblocked run's in
every single trial, and saved counts are never negative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Graph
from .immunize import ImmunizationPlan
from .seeding import derive_seed, edge_coin_array


@dataclass(frozen=True)
class SpreadConfig:
    """Cascade parameters: activation probability, trial count, master seed."""

    p: float
    trials: int
    master_seed: int
    max_steps: int = 64

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass(frozen=True)
class SpreadOutcome:
    """Aggregated cascade results over all trials."""

    mean_activated: float
    active_series: list[float]
    per_trial_activated: list[int]
    trial_sets: tuple[frozenset, ...] | None = None


@dataclass(frozen=True)
class MitigationReport:
    """Paired unblocked/blocked outcomes and the resulting saved-node count."""

    unblocked: SpreadOutcome
    blocked: SpreadOutcome
    saved: float


def _validate_indices(name: str, indices: Iterable[int], n: int) -> np.ndarray:
    arr = np.unique(np.fromiter((int(i) for i in indices), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise ValueError(f"{name} contains indices outside 0..{n - 1}")
    return arr


def _frontier_targets(graph: Graph, frontier: np.ndarray):
    starts = graph.offsets[frontier]
    counts = graph.offsets[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    src = np.repeat(frontier, counts)
    within = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    tgt = graph.neighbors[np.repeat(starts, counts) + within].astype(np.int64)
    return src, tgt


def _run_trial(graph: Graph, seeds: np.ndarray, blocked_mask: np.ndarray,
               p: float, trial_seed: int, max_steps: int):
    active = np.zeros(graph.n, dtype=bool)
    effective = seeds[~blocked_mask[seeds]]
    active[effective] = True
    count = int(effective.size)
    series = [count]
    frontier = effective
    for _ in range(max_steps):
        if frontier.size == 0:
            break
        src, tgt = _frontier_targets(graph, frontier)
        open_target = ~active[tgt] & ~blocked_mask[tgt]
        src, tgt = src[open_target], tgt[open_target]
        if src.size:
            coins = edge_coin_array(trial_seed, src, tgt, epoch=0)
            newly = np.unique(tgt[coins < p])
        else:
            newly = np.zeros(0, dtype=np.int64)
        active[newly] = True
        count += int(newly.size)
        series.append(count)
        frontier = newly
    return active, _truncate_series(series)


def _truncate_series(series: list[int]) -> list[int]:
    # keep one entry past the last change; a flat series collapses to its seed entry
    last_change = 0
    for t in range(1, len(series)):
        if series[t] != series[t - 1]:
            last_change = t
    if last_change == 0:
        return series[:1]
    return series[:last_change + 2]


def simulate_spread(graph: Graph, seeds: Iterable[int], blocked: Iterable[int],
                    cfg: SpreadConfig, collect_sets: bool = False) -> SpreadOutcome:
    """Run cfg.trials independent cascades from seeds, with blocked nodes removed.

    Blocked nodes never activate and are skipped as seeds. The active series
    is the positionwise mean of per-trial cumulative counts, padded with each
    trial's final count; entry 0 is the effective seed count.
    """
    seed_arr = _validate_indices("seeds", seeds, graph.n)
    blocked_arr = _validate_indices("blocked", blocked, graph.n)
    blocked_mask = np.zeros(graph.n, dtype=bool)
    blocked_mask[blocked_arr] = True

    per_trial: list[int] = []
    all_series: list[list[int]] = []
    sets: list[frozenset] = []
    for t in range(cfg.trials):
        active, series = _run_trial(graph, seed_arr, blocked_mask, cfg.p,
                                    derive_seed(cfg.master_seed, t), cfg.max_steps)
        per_trial.append(series[-1])
        all_series.append(series)
        if collect_sets:
            sets.append(frozenset(int(i) for i in np.flatnonzero(active)))

    longest = max(len(s) for s in all_series)
    padded = np.array([s + [s[-1]] * (longest - len(s)) for s in all_series], dtype=np.float64)
    return SpreadOutcome(
        mean_activated=float(np.mean(per_trial)),
        active_series=[float(x) for x in padded.mean(axis=0)],
        per_trial_activated=per_trial,
        trial_sets=tuple(sets) if collect_sets else None,
    )


def compare_with_plan(graph: Graph, seeds: Iterable[int], plan: ImmunizationPlan,
                      cfg: SpreadConfig, collect_sets: bool = False) -> MitigationReport:
    """Coupled unblocked/blocked runs sharing trial seeds and edge coins."""
    seeds = list(seeds)
    unblocked = simulate_spread(graph, seeds, (), cfg, collect_sets=collect_sets)
    blocked = simulate_spread(graph, seeds, plan.blocked, cfg, collect_sets=collect_sets)
    return MitigationReport(unblocked=unblocked, blocked=blocked,
                            saved=unblocked.mean_activated - blocked.mean_activated)


def outcome_to_json(outcome: SpreadOutcome) -> dict:
    return {
        "activated_nodes": outcome.mean_activated,
        "active_series": list(outcome.active_series),
        "trials": len(outcome.per_trial_activated),
    }


def report_to_json(report: MitigationReport) -> dict:
    """Rows shaped like the evaluation tables: graph, activated, saved, series."""
    return {
        "rows": [
            {"graph": "unblocked",
             "activated_nodes": report.unblocked.mean_activated,
             "saved_nodes": 0.0,
             "active_series": list(report.unblocked.active_series)},
            {"graph": "blocked",
             "activated_nodes": report.blocked.mean_activated,
             "saved_nodes": report.saved,
             "active_series": list(report.blocked.active_series)},
        ],
        "saved": report.saved,
    }
