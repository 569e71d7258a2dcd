"""Derived statistics over run-averaged training series.

All functions are pure and operate on BatchResult aggregates: learning
curves (reward, success), per-episode movement distance, and the three
summary statistics used to pick a scale factor (total distance, minimum
distance, below-average episode count).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .learner import BatchResult

TOTAL_DISTANCE_MODES = ("tail_mean", "full_mean", "raw_sum")


@dataclass(frozen=True)
class ScaleStats:
    """Summary row for one scale factor.

    ``below_avg_episode_count`` counts episodes whose run-averaged total
    distance falls strictly below the mean over episodes;
    ``below_avg_tail_start`` is the alternative reading, the first episode
    after which the series stays below that mean for good.
    """

    scale: float
    total_distance: float
    min_distance: float
    below_avg_episode_count: int
    max_success_rate: float
    episode_of_max_success: int
    below_avg_tail_start: int = 0


def average_reward_series(batch: BatchResult) -> np.ndarray:
    """Mean total reward per episode index, across runs."""
    return batch.mean_reward.copy()


def average_distance_series(batch: BatchResult) -> np.ndarray:
    """Mean over runs of (episode total distance / episode iterations)."""
    return batch.mean_step_distance.copy()


def success_rate_series(batch: BatchResult) -> np.ndarray:
    """Percentage of runs that reached the terminal state, per episode."""
    return 100.0 * batch.success_fraction


def success_summary(batch: BatchResult) -> tuple[float, int]:
    """(max success percentage, first episode index attaining it)."""
    series = success_rate_series(batch)
    best = float(series.max())
    return best, int(np.argmax(series))


def total_distance_series(batch: BatchResult) -> np.ndarray:
    """Run-averaged total distance per episode (the T(e) series)."""
    return batch.mean_total_distance.copy()


def total_distance_statistic(
    series: np.ndarray, mode: str = "tail_mean", tail_fraction: float = 0.25
) -> float:
    """Collapse the per-episode total-distance series to one number.

    tail_mean averages the final ``tail_fraction`` of episodes (the
    converged regime), full_mean averages everything, raw_sum just sums.
    """
    if mode == "tail_mean":
        tail = max(1, int(round(len(series) * tail_fraction)))
        return float(series[-tail:].mean())
    if mode == "full_mean":
        return float(series.mean())
    if mode == "raw_sum":
        return float(series.sum())
    raise ValueError(f"unknown total_distance_mode {mode!r}; use one of {TOTAL_DISTANCE_MODES}")


def below_average_count(series: np.ndarray) -> int:
    """Number of episodes strictly below the mean of the series."""
    return int(np.sum(series < series.mean()))


def below_average_tail_start(series: np.ndarray) -> int:
    """First episode index from which the series stays below its mean.

    Returns len(series) when the last episode is not below the mean.
    """
    mean = series.mean()
    above = np.nonzero(series >= mean)[0]
    if len(above) == 0:
        return 0
    return int(above[-1]) + 1


def scale_stats(
    batch: BatchResult,
    scale: float,
    total_distance_mode: str = "tail_mean",
    tail_fraction: float = 0.25,
) -> ScaleStats:
    """The scale-selection summary row for one trained batch."""
    series = total_distance_series(batch)
    best, at = success_summary(batch)
    return ScaleStats(
        scale=scale,
        total_distance=total_distance_statistic(series, total_distance_mode, tail_fraction),
        min_distance=float(series.min()),
        below_avg_episode_count=below_average_count(series),
        max_success_rate=best,
        episode_of_max_success=at,
        below_avg_tail_start=below_average_tail_start(series),
    )


def normalize(values) -> np.ndarray:
    """Min-max normalization into [0, 1]; a constant array maps to zeros."""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise ValueError("normalize needs at least 2 values")
    span = arr.max() - arr.min()
    if span == 0.0:
        return np.zeros_like(arr)
    return (arr - arr.min()) / span
