"""Distance-penalized tabular Q-learning on grid-partitioned cleaning tasks."""

__version__ = "0.1.0"

from .grid_env import (
    CleanState,
    GridWorld,
    InvalidEnvironmentError,
    StepKind,
    StepOutcome,
    cell_coords,
    initial_state,
    is_terminal,
    new_grid,
    state_index,
    step,
)
from .learner import (
    BatchResult,
    EpisodeStats,
    LearnerConfig,
    RunSeries,
    dist_calc,
    greedy_rollout,
    qsd_update,
    run_batch,
    run_episode,
    run_training,
    select_action,
)
from .metrics import ScaleStats, normalize, scale_stats
from .oracle import OracleResult, brute_force_min_distance, reference_q_learning
from .sweep import SelectionError, SweepReport, run_sweep, select_optimal_scale

__all__ = [
    "BatchResult",
    "CleanState",
    "EpisodeStats",
    "GridWorld",
    "InvalidEnvironmentError",
    "LearnerConfig",
    "OracleResult",
    "RunSeries",
    "ScaleStats",
    "SelectionError",
    "StepKind",
    "StepOutcome",
    "SweepReport",
    "brute_force_min_distance",
    "cell_coords",
    "dist_calc",
    "greedy_rollout",
    "initial_state",
    "is_terminal",
    "new_grid",
    "normalize",
    "qsd_update",
    "reference_q_learning",
    "run_batch",
    "run_episode",
    "run_sweep",
    "run_training",
    "scale_stats",
    "select_action",
    "select_optimal_scale",
    "state_index",
    "step",
]
