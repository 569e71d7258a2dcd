"""Train one batch at two penalty scales and compare the learning curves.

The update is standard Q-learning plus a travel-distance penalty scaled
by ``s``; ``s=0`` is exactly standard Q-learning. Run:

    python3 demos/02_training_and_metrics.py
"""
import numpy as np

from qsd.grid_env import new_grid
from qsd.learner import LearnerConfig, run_batch
from qsd.metrics import scale_stats, success_summary

world = new_grid(3, {4})

for scale in (0.0, 0.15):
    cfg = LearnerConfig.for_world(world, scale=scale, runs=200)
    batch = run_batch(world, cfg)
    stats = scale_stats(batch, scale)
    rate, episode = success_summary(batch)
    tail = batch.mean_step_distance[-25:].mean()
    print(f"s = {scale:.2f}")
    print(f"  success plateau: {rate:.1f}% (first reached at episode {episode})")
    print(f"  mean reward, last 25 episodes: "
          f"{batch.mean_reward[-25:].mean():+.3f}")
    print(f"  mean step distance, last 25 episodes: {tail:.4f}")
    print(f"  episode travel (tail mean {stats.total_distance:.2f}, "
          f"min {stats.min_distance:.2f}, "
          f"{stats.below_avg_episode_count} below-average episodes)")

print("\nThe penalized learner trades a little success rate for visibly")
print("shorter routes; push s much higher and learning collapses.")

cfg = LearnerConfig.for_world(world, scale=0.24, runs=200)
rate, _ = success_summary(run_batch(world, cfg))
print(f"s = 0.24 success plateau: {rate:.1f}%")
