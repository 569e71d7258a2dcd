"""Scale-factor sweeps and optimal-scale selection.

A sweep trains one batch per scale factor (same seed policy throughout,
so the scale-0 column is a paired control), summarizes each with
ScaleStats, min-max normalizes the three summary curves across scales,
and picks the scale minimizing normalized total distance plus normalized
below-average episode count, subject to a success-degradation filter
against the scale-0 baseline.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .grid_env import GridWorld
from .learner import BatchResult, LearnerConfig, run_batch
from .metrics import normalize, scale_stats as compute_scale_stats, ScaleStats


class SelectionError(RuntimeError):
    """No scale survived the success filter; carries the baseline fallback."""

    def __init__(self, message: str, fallback: float = 0.0):
        super().__init__(message)
        self.fallback = fallback


@dataclass
class SweepReport:
    scales: tuple[float, ...]
    stats: tuple[ScaleStats, ...]
    norm_total: np.ndarray
    norm_min: np.ndarray
    norm_count: np.ndarray
    selected_scale: float
    filter_threshold_pp: float
    batches: Optional[tuple[BatchResult, ...]] = None


def _validate_scales(scales: Sequence[float]) -> tuple[float, ...]:
    scales = tuple(float(s) for s in scales)
    if not scales:
        raise ValueError("scales must be nonempty")
    if any(s < 0 for s in scales):
        raise ValueError("scales must all be >= 0")
    if 0.0 not in scales:
        raise ValueError("scales must include the 0 baseline")
    if list(scales) != sorted(set(scales)):
        raise ValueError("scales must be strictly ascending")
    return scales


def select_optimal_scale(
    stats: Sequence[ScaleStats], filter_threshold_pp: float = 5.0
) -> float:
    """Pick the scale whose normalized (total distance + below-average
    count) is smallest, among scales whose max success rate stays within
    ``filter_threshold_pp`` points of the scale-0 baseline. Ties go to
    the smaller scale.
    """
    stats = sorted(stats, key=lambda st: st.scale)
    if len(stats) == 1:
        return stats[0].scale
    baseline = next((st for st in stats if st.scale == 0.0), None)
    if baseline is None:
        raise ValueError("selection requires the scale-0 baseline row")
    norm_total = normalize([st.total_distance for st in stats])
    norm_count = normalize([st.below_avg_episode_count for st in stats])
    floor = baseline.max_success_rate - filter_threshold_pp
    candidates = [
        (norm_total[i] + norm_count[i], st.scale)
        for i, st in enumerate(stats)
        if st.max_success_rate >= floor
    ]
    if not candidates:
        raise SelectionError(
            "every scale fails the success-degradation filter; "
            "falling back to the scale-0 baseline",
            fallback=0.0,
        )
    # min on (criterion, scale) pairs breaks ties toward the smaller scale
    return min(candidates)[1]


def run_sweep(
    world: GridWorld,
    base_cfg: LearnerConfig,
    scales: Sequence[float],
    workers: Optional[int] = None,
    total_distance_mode: str = "tail_mean",
    filter_threshold_pp: float = 5.0,
    keep_batches: bool = True,
) -> SweepReport:
    """One run_batch per scale, summarized and normalized across scales."""
    scales = _validate_scales(scales)
    batches = []
    stats = []
    for s in scales:
        batch = run_batch(world, base_cfg.with_scale(s), workers=workers)
        batches.append(batch)
        stats.append(compute_scale_stats(batch, s, total_distance_mode))

    if len(scales) == 1:
        norm_total = norm_min = norm_count = np.zeros(1)
        selected = scales[0]
    else:
        norm_total = normalize([st.total_distance for st in stats])
        norm_min = normalize([st.min_distance for st in stats])
        norm_count = normalize([st.below_avg_episode_count for st in stats])
        try:
            selected = select_optimal_scale(stats, filter_threshold_pp)
        except SelectionError as err:
            selected = err.fallback
    return SweepReport(
        scales=scales,
        stats=tuple(stats),
        norm_total=norm_total,
        norm_min=norm_min,
        norm_count=norm_count,
        selected_scale=selected,
        filter_threshold_pp=filter_threshold_pp,
        batches=tuple(batches) if keep_batches else None,
    )
