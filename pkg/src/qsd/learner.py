"""Q-learning engine with a scaled travel-distance penalty.

The value update is the standard temporal-difference rule with an extra
term subtracted after the learning-rate bracket:

    Q(s,a) <- Q(s,a) + alpha * (r + gamma * max_a' Q(s',a') - Q(s,a))
              - scale * dmetric

where ``dmetric`` is the Euclidean distance between the previously chosen
cell and the current one. With ``scale = 0`` this is exactly standard
Q-learning, and the engine is required (and tested) to be bit-identical
to an independently coded reference in that case.

RNG contract, shared with the reference implementation: action selection
consumes one ``rng.random()`` draw; if it falls below epsilon, one
``rng.randrange(G)`` draw follows. Nothing else consumes randomness.
Per-run seeds are derived from the batch seed with a splitmix64 mix, so
runs are reproducible independently of worker scheduling.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .grid_env import GridWorld, StepKind, apply_action, distance_matrix

QTable = np.ndarray  # shape (n_states, n_cells), float64


@dataclass(frozen=True)
class LearnerConfig:
    """Hyperparameters and budgets for one training batch.

    ``scale`` is the weight on the distance penalty; 0 disables it.
    """

    alpha: float
    gamma: float
    epsilon: float
    scale: float
    max_iterations: int
    episodes_per_run: int
    runs: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.scale < 0.0:
            raise ValueError(
                f"scale must satisfy s >= 0, got {self.scale}"
            )
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.episodes_per_run < 1:
            raise ValueError("episodes_per_run must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")

    @classmethod
    def for_world(cls, world: GridWorld, **overrides) -> "LearnerConfig":
        """Calibrated defaults for the two benchmark scenarios; other
        worlds fall back to a generous iteration budget."""
        key = (world.side, tuple(sorted(world.object_cells)))
        calibrated_budget = {
            (3, (4,)): 12,
            (4, (5, 6, 9, 10)): 21,
        }
        values = dict(
            alpha=0.3,
            gamma=0.9,
            epsilon=0.3,
            scale=0.0,
            max_iterations=calibrated_budget.get(key, 3 * world.n_free),
            episodes_per_run=100,
            runs=1000,
            seed=42,
        )
        values.update(overrides)
        return cls(**values)

    def with_scale(self, scale: float) -> "LearnerConfig":
        return replace(self, scale=scale)


@dataclass(frozen=True)
class EpisodeStats:
    total_reward: float
    iterations: int
    total_distance: float
    success: bool


@dataclass
class RunSeries:
    """Per-episode stats of one run, arrays indexed by episode."""

    rewards: np.ndarray
    iterations: np.ndarray
    distances: np.ndarray
    successes: np.ndarray
    final_q: Optional[QTable] = None

    def __len__(self) -> int:
        return len(self.rewards)


@dataclass
class BatchResult:
    """Run-averaged series for one configuration."""

    config: LearnerConfig
    mean_reward: np.ndarray
    mean_step_distance: np.ndarray  # mean over runs of total_distance/iterations
    mean_total_distance: np.ndarray
    success_fraction: np.ndarray

    @property
    def episodes(self) -> int:
        return len(self.mean_reward)


_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 output step; a portable 64-bit mixer."""
    x = (x + _SPLITMIX_GAMMA) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_run_seed(seed: int, run_index: int) -> int:
    """Deterministic per-run seed, decorrelated across run indices."""
    return splitmix64((seed & _MASK64) + run_index * _SPLITMIX_GAMMA)


def dist_calc(current: int, previous: int, world: GridWorld) -> float:
    """Euclidean distance between two cells, in grid-edge units."""
    for cell in (current, previous):
        if not 0 <= cell < world.n_cells:
            raise IndexError(f"cell {cell} out of range [0, {world.n_cells})")
    rc, cc = divmod(current, world.side)
    rp, cp = divmod(previous, world.side)
    return ((rc - rp) ** 2 + (cc - cp) ** 2) ** 0.5


def select_action(q: QTable, state_row: int, epsilon: float, rng: random.Random) -> int:
    """Epsilon-greedy over all cells; greedy ties break to the lowest index."""
    if epsilon > 0.0 and rng.random() < epsilon:
        return rng.randrange(q.shape[1])
    row = q[state_row]
    return int(np.argmax(row))


def qsd_update(
    q: QTable,
    s_t: int,
    a_t: int,
    reward: float,
    s_next: int,
    dmetric: float,
    cfg: LearnerConfig,
) -> float:
    """Apply one value update in place and return the new Q(s_t, a_t).

    The distance penalty sits outside the learning-rate bracket, so it is
    not attenuated by alpha.
    """
    old = q[s_t, a_t]
    new = (
        old
        + cfg.alpha * (reward + cfg.gamma * float(np.max(q[s_next])) - old)
        - cfg.scale * dmetric
    )
    if not np.isfinite(new):
        raise FloatingPointError(
            f"non-finite Q update at state {s_t}, action {a_t}: {new}"
        )
    q[s_t, a_t] = new
    return float(new)


def run_episode(
    world: GridWorld,
    q: QTable,
    cfg: LearnerConfig,
    rng: random.Random,
    initial_prev_cell: Optional[int] = None,
) -> EpisodeStats:
    """One episode from the all-unclean state, updating q in place.

    Ends on the terminal state or when the iteration budget is spent. The
    first action has no previous cell, so its distance is 0 unless
    ``initial_prev_cell`` supplies a home position.
    """
    mask = 0
    full = world.full_mask
    prev_cell = initial_prev_cell
    total_reward = 0.0
    total_distance = 0.0
    itr = 0
    while itr < cfg.max_iterations:
        action = select_action(q, mask, cfg.epsilon, rng)
        next_mask, reward, _kind = apply_action(world, mask, action)
        d = 0.0 if prev_cell is None else dist_calc(action, prev_cell, world)
        qsd_update(q, mask, action, reward, next_mask, d, cfg)
        itr += 1
        prev_cell = action
        total_reward += reward
        total_distance += d
        mask = next_mask
        if mask == full:
            break
    return EpisodeStats(
        total_reward=total_reward,
        iterations=itr,
        total_distance=total_distance,
        success=mask == full,
    )


def _train_fast(world: GridWorld, cfg: LearnerConfig, seed: int) -> RunSeries:
    """Hot path for run_training: same updates as run_episode, on plain
    Python lists to keep per-step overhead low. Bit-equivalence with the
    public ops is covered by tests."""
    n_states = world.n_states
    n_cells = world.n_cells
    full = world.full_mask
    dist = distance_matrix(world)
    q = [[0.0] * n_cells for _ in range(n_states)]
    rng = random.Random(seed)
    rng_random = rng.random
    rng_randrange = rng.randrange
    alpha = cfg.alpha
    gamma = cfg.gamma
    epsilon = cfg.epsilon
    scale = cfg.scale
    max_itr = cfg.max_iterations
    bit_of = world._bit_of

    episodes = cfg.episodes_per_run
    rewards = np.empty(episodes)
    iterations = np.empty(episodes, dtype=np.int64)
    distances = np.empty(episodes)
    successes = np.empty(episodes, dtype=bool)

    for ep in range(episodes):
        mask = 0
        prev_cell = -1
        total_reward = 0.0
        total_distance = 0.0
        itr = 0
        while itr < max_itr:
            if epsilon > 0.0 and rng_random() < epsilon:
                action = rng_randrange(n_cells)
            else:
                row = q[mask]
                action = row.index(max(row))
            bit = bit_of[action]
            if bit < 0:
                next_mask = mask
                reward = -1.0
            elif mask >> bit & 1:
                next_mask = mask
                reward = -0.01
            else:
                next_mask = mask | (1 << bit)
                reward = 1.0
            d = 0.0 if prev_cell < 0 else dist[action][prev_cell]
            row = q[mask]
            old = row[action]
            row[action] = (
                old + alpha * (reward + gamma * max(q[next_mask]) - old) - scale * d
            )
            itr += 1
            prev_cell = action
            total_reward += reward
            total_distance += d
            mask = next_mask
            if mask == full:
                break
        rewards[ep] = total_reward
        iterations[ep] = itr
        distances[ep] = total_distance
        successes[ep] = mask == full

    final_q = np.array(q)
    if not np.all(np.isfinite(final_q)):
        raise FloatingPointError("non-finite Q values after training")
    return RunSeries(
        rewards=rewards,
        iterations=iterations,
        distances=distances,
        successes=successes,
        final_q=final_q,
    )


def run_training(world: GridWorld, cfg: LearnerConfig, run_index: int = 0) -> RunSeries:
    """One run: a fresh zero table trained for episodes_per_run episodes.

    Fully determined by (cfg.seed, run_index).
    """
    return _train_fast(world, cfg, derive_run_seed(cfg.seed, run_index))


def _run_training_job(args: tuple[GridWorld, LearnerConfig, int]) -> RunSeries:
    world, cfg, run_index = args
    series = run_training(world, cfg, run_index)
    series.final_q = None  # not aggregated; keep worker payloads small
    return series


def run_batch(
    world: GridWorld, cfg: LearnerConfig, workers: Optional[int] = None
) -> BatchResult:
    """cfg.runs independent runs, reduced to mean series in run-index order.

    The reduction is identical whether runs execute sequentially or on a
    worker pool, so ``workers`` only affects wall time.
    """
    jobs = [(world, cfg, i) for i in range(cfg.runs)]
    if workers is not None and workers > 1 and cfg.runs > 1:
        chunk = max(1, cfg.runs // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            all_series: Sequence[RunSeries] = list(
                pool.map(_run_training_job, jobs, chunksize=chunk)
            )
    else:
        all_series = [_run_training_job(j) for j in jobs]

    rewards = np.stack([s.rewards for s in all_series])
    iters = np.stack([s.iterations for s in all_series])
    dists = np.stack([s.distances for s in all_series])
    succ = np.stack([s.successes for s in all_series])
    return BatchResult(
        config=cfg,
        mean_reward=rewards.mean(axis=0),
        mean_step_distance=(dists / iters).mean(axis=0),
        mean_total_distance=dists.mean(axis=0),
        success_fraction=succ.mean(axis=0),
    )


def greedy_policy(q: QTable) -> np.ndarray:
    """Greedy action per state, ties to the lowest action index."""
    return np.argmax(q, axis=1)


def greedy_rollout(
    world: GridWorld, q: QTable, max_iterations: int
) -> EpisodeStats:
    """Follow the greedy policy with no exploration; no learning updates."""
    mask = 0
    full = world.full_mask
    prev_cell: Optional[int] = None
    total_reward = 0.0
    total_distance = 0.0
    itr = 0
    while itr < max_iterations and mask != full:
        action = int(np.argmax(q[mask]))
        mask, reward, _kind = apply_action(world, mask, action)
        if prev_cell is not None:
            total_distance += dist_calc(action, prev_cell, world)
        prev_cell = action
        total_reward += reward
        itr += 1
    return EpisodeStats(
        total_reward=total_reward,
        iterations=itr,
        total_distance=total_distance,
        success=mask == full,
    )
