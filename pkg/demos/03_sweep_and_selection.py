"""Sweep the penalty scale and pick the best trade-off automatically.

For each scale the sweep trains a batch, summarizes travel statistics,
min-max normalizes them across scales, and selects the scale minimizing
normalized (total distance + below-average count) among scales whose
success stays within 5 points of the s=0 baseline. Run:

    python3 demos/03_sweep_and_selection.py
"""
from qsd.grid_env import new_grid
from qsd.learner import LearnerConfig
from qsd.sweep import run_sweep

world = new_grid(3, {4})
cfg = LearnerConfig.for_world(world, runs=300)
scales = (0.0, 0.04, 0.08, 0.10, 0.15, 0.20, 0.24)

report = run_sweep(world, cfg, scales)

print(f"{'scale':>6}  {'success%':>8}  {'travel':>7}  {'min':>6}  "
      f"{'below-avg':>9}  {'norm total':>10}  {'norm count':>10}")
for i, st in enumerate(report.stats):
    print(f"{st.scale:>6.2f}  {st.max_success_rate:>8.1f}  "
          f"{st.total_distance:>7.2f}  {st.min_distance:>6.2f}  "
          f"{st.below_avg_episode_count:>9d}  "
          f"{report.norm_total[i]:>10.3f}  {report.norm_count[i]:>10.3f}")

print(f"\nselected scale: {report.selected_scale:g} "
      f"(success filter: within {report.filter_threshold_pp:g} points of baseline)")

baseline = report.stats[0].total_distance
chosen = next(s for s in report.stats if s.scale == report.selected_scale)
drop = 100 * (baseline - chosen.total_distance) / baseline
print(f"episode travel at the selected scale is {drop:.1f}% below the "
      f"unpenalized baseline")
