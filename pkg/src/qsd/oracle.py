"""Independent ground truth for tests: exact minimum-travel cleaning
orders, and a standalone standard Q-learning loop used for bit-exact
equivalence checks against the main engine at scale 0.

The movement optimum is the cheapest open Hamiltonian path over the free
cells (no return to start). With no explicit start cell the first move is
free, matching the engine's first-step rule.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Optional

import numpy as np

from .grid_env import GridWorld, apply_action, distance_matrix
from .learner import (
    LearnerConfig,
    QTable,
    RunSeries,
    derive_run_seed,
)

PERMUTATION_LIMIT = 10  # 10! ~ 3.6M orders; beyond this use the DP
DP_LIMIT = 16


class OracleSizeError(ValueError):
    """Instance too large for the requested enumeration method."""


@dataclass(frozen=True)
class OracleResult:
    min_distance: float
    optimal_order: tuple[int, ...]
    orders_examined: int


def _min_path_permutations(
    cells: tuple[int, ...], dist, start: Optional[int]
) -> OracleResult:
    best = float("inf")
    best_order: tuple[int, ...] = ()
    count = 0
    for order in permutations(cells):
        count += 1
        total = 0.0 if start is None else dist[start][order[0]]
        prev = order[0]
        for cell in order[1:]:
            total += dist[prev][cell]
            if total >= best:
                break
            prev = cell
        else:
            if total < best:
                best = total
                best_order = order
    return OracleResult(best, best_order, count)


def _min_path_dp(cells: tuple[int, ...], dist, start: Optional[int]) -> OracleResult:
    """Held-Karp over subsets: cost[visited][last] = cheapest path ending
    at ``last`` having cleaned exactly ``visited``."""
    n = len(cells)
    full = (1 << n) - 1
    inf = float("inf")
    cost = [[inf] * n for _ in range(1 << n)]
    parent = [[-1] * n for _ in range(1 << n)]
    for i, c in enumerate(cells):
        cost[1 << i][i] = 0.0 if start is None else dist[start][c]
    states = 0
    for visited in range(1, full + 1):
        row = cost[visited]
        for last in range(n):
            base = row[last]
            if base == inf:
                continue
            states += 1
            d_last = dist[cells[last]]
            for nxt in range(n):
                if visited >> nxt & 1:
                    continue
                nv = visited | (1 << nxt)
                cand = base + d_last[cells[nxt]]
                if cand < cost[nv][nxt]:
                    cost[nv][nxt] = cand
                    parent[nv][nxt] = last
    last = min(range(n), key=lambda i: cost[full][i])
    best = cost[full][last]
    order = []
    visited = full
    while last >= 0:
        order.append(cells[last])
        nxt = parent[visited][last]
        visited ^= 1 << last
        last = nxt
    order.reverse()
    return OracleResult(best, tuple(order), states)


def brute_force_min_distance(
    world: GridWorld,
    start: Optional[int] = None,
    method: str = "auto",
    force: bool = False,
) -> OracleResult:
    """Exact minimum total travel distance to clean every free cell once.

    ``method`` is "permutation", "dp", or "auto" (permutation up to 8
    free cells, DP above). Full permutation enumeration past the
    10-cell guard requires ``force=True``; the DP covers up to 16.
    """
    cells = world.free_cells
    n = len(cells)
    dist = distance_matrix(world)
    if method == "auto":
        method = "permutation" if n <= 8 else "dp"
    if method == "permutation":
        if n > PERMUTATION_LIMIT and not force:
            raise OracleSizeError(
                f"{n} free cells means {n}! orders; pass force=True or use the DP"
            )
        return _min_path_permutations(cells, dist, start)
    if method == "dp":
        if n > DP_LIMIT:
            raise OracleSizeError(f"DP oracle limited to {DP_LIMIT} free cells, got {n}")
        return _min_path_dp(cells, dist, start)
    raise ValueError(f"unknown method {method!r}")


def reference_training(world: GridWorld, cfg: LearnerConfig, run_index: int = 0) -> RunSeries:
    """Standard Q-learning run, coded separately from the main engine.

    Shares only the environment transition and the RNG contract (one
    random() per step, one randrange(G) on exploration), so a scale-0
    engine run with the same seed must match it bit for bit.
    """
    n_cells = world.n_cells
    q = np.zeros((world.n_states, n_cells))
    rng = random.Random(derive_run_seed(cfg.seed, run_index))
    full = world.full_mask

    episodes = cfg.episodes_per_run
    rewards = np.empty(episodes)
    iterations = np.empty(episodes, dtype=np.int64)
    distances = np.empty(episodes)
    successes = np.empty(episodes, dtype=bool)
    side = world.side

    for ep in range(episodes):
        mask = 0
        prev = -1
        ep_reward = 0.0
        ep_dist = 0.0
        steps = 0
        while steps < cfg.max_iterations:
            if cfg.epsilon > 0.0 and rng.random() < cfg.epsilon:
                a = rng.randrange(n_cells)
            else:
                a = int(np.argmax(q[mask]))
            nxt, r, _kind = apply_action(world, mask, a)
            if prev >= 0:
                dr = a // side - prev // side
                dc = a % side - prev % side
                d = (dr * dr + dc * dc) ** 0.5
            else:
                d = 0.0
            old = q[mask, a]
            q[mask, a] = old + cfg.alpha * (r + cfg.gamma * max(q[nxt]) - old) - 0.0 * d
            steps += 1
            prev = a
            ep_reward += r
            ep_dist += d
            mask = nxt
            if mask == full:
                break
        rewards[ep] = ep_reward
        iterations[ep] = steps
        distances[ep] = ep_dist
        successes[ep] = mask == full

    return RunSeries(
        rewards=rewards,
        iterations=iterations,
        distances=distances,
        successes=successes,
        final_q=q,
    )


def reference_q_learning(world: GridWorld, cfg: LearnerConfig, run_index: int = 0) -> QTable:
    """Final table of one reference run; cfg.scale is ignored (always 0)."""
    return reference_training(world, cfg, run_index).final_q
