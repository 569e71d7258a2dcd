"""Compare learned routes against the exact minimum cleaning distance.

The oracle enumerates visit orders of the free cells (exhaustively for
small grids, Held-Karp dynamic programming for larger ones) to find the
shortest possible total travel. No learned episode can beat it, and a
well-trained greedy policy should land close to it. Run:

    python3 demos/04_oracle_check.py
"""
import numpy as np

from qsd.grid_env import cell_label, new_grid
from qsd.learner import LearnerConfig, greedy_rollout, run_training
from qsd.oracle import brute_force_min_distance

world = new_grid(3, {4})
oracle = brute_force_min_distance(world)
order = " -> ".join(cell_label(c) for c in oracle.optimal_order)
print(f"exact minimum travel: {oracle.min_distance:.3f} "
      f"({oracle.orders_examined} visit orders examined)")
print(f"one optimal route: {order}\n")

# Long, mildly exploratory training converges to near-optimal policies.
cfg = LearnerConfig.for_world(world, scale=0.15, epsilon=0.1,
                              episodes_per_run=1000)
distances = []
for run_index in range(20):
    series = run_training(world, cfg, run_index=run_index)
    roll = greedy_rollout(world, series.final_q, 2 * world.n_free)
    if roll.success:
        distances.append(roll.total_distance)

print(f"greedy policies from {len(distances)}/20 runs reach the terminal state")
print(f"mean greedy travel: {np.mean(distances):.3f} "
      f"(oracle floor {oracle.min_distance:.3f}, "
      f"{100 * (np.mean(distances) / oracle.min_distance - 1):.1f}% above)")
assert min(distances) >= oracle.min_distance - 1e-9
print("no learned route beats the oracle, as it must be")
