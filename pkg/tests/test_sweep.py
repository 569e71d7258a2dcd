import numpy as np
import pytest

from qsd.grid_env import new_grid
from qsd.learner import LearnerConfig, run_batch
from qsd.metrics import ScaleStats
from qsd.published import published_scale_stats
from qsd.sweep import run_sweep, select_optimal_scale


@pytest.fixture
def world3():
    return new_grid(3, {4})


def small_cfg(world, **over):
    defaults = dict(runs=20, episodes_per_run=40)
    defaults.update(over)
    return LearnerConfig.for_world(world, **defaults)


class TestSelection:
    def test_published_3x3_table_selects_010(self):
        assert select_optimal_scale(published_scale_stats("3x3")) == 0.10

    def test_published_4x4_table_selects_008(self):
        assert select_optimal_scale(published_scale_stats("4x4")) == 0.08

    def test_single_scale_report(self, world3):
        report = run_sweep(world3, small_cfg(world3, runs=3), (0.0,))
        assert report.selected_scale == 0.0
        assert np.array_equal(report.norm_total, [0.0])

    def test_success_filter_excludes_degraded_scales(self):
        rows = [
            ScaleStats(0.0, 10.0, 9.0, 30, 90.0, 50),
            # cheapest on both curves but success collapsed
            ScaleStats(0.1, 1.0, 1.0, 1, 40.0, 50),
            ScaleStats(0.05, 8.0, 8.0, 20, 88.0, 50),
        ]
        assert select_optimal_scale(rows) == 0.05

    def test_selection_requires_baseline(self):
        rows = [ScaleStats(0.1, 1.0, 1.0, 1, 90.0, 50),
                ScaleStats(0.2, 2.0, 2.0, 2, 90.0, 50)]
        with pytest.raises(ValueError):
            select_optimal_scale(rows)

    def test_affine_invariance(self):
        # positive affine rescaling of the raw curves cannot change the pick
        rows = published_scale_stats("3x3")
        scaled = [
            ScaleStats(
                st.scale,
                3.0 * st.total_distance + 7.0,
                st.min_distance,
                int(st.below_avg_episode_count * 2),
                st.max_success_rate,
                st.episode_of_max_success,
            )
            for st in rows
        ]
        assert select_optimal_scale(scaled) == select_optimal_scale(rows)

    def test_ties_break_to_smaller_scale(self):
        rows = [
            ScaleStats(0.0, 5.0, 5.0, 10, 90.0, 50),
            ScaleStats(0.1, 5.0, 5.0, 10, 90.0, 50),
            ScaleStats(0.2, 9.0, 9.0, 20, 90.0, 50),
        ]
        assert select_optimal_scale(rows) == 0.0


class TestScaleValidation:
    def test_missing_baseline_rejected(self, world3):
        with pytest.raises(ValueError):
            run_sweep(world3, small_cfg(world3), (0.04, 0.08))

    def test_negative_scale_rejected(self, world3):
        with pytest.raises(ValueError):
            run_sweep(world3, small_cfg(world3), (-0.1, 0.0))

    def test_unsorted_rejected(self, world3):
        with pytest.raises(ValueError):
            run_sweep(world3, small_cfg(world3), (0.1, 0.0))

    def test_empty_rejected(self, world3):
        with pytest.raises(ValueError):
            run_sweep(world3, small_cfg(world3), ())


class TestSweepRun:
    def test_baseline_column_matches_standalone_batch(self, world3):
        cfg = small_cfg(world3, runs=10)
        report = run_sweep(world3, cfg, (0.0, 0.1))
        standalone = run_batch(world3, cfg.with_scale(0.0))
        assert np.array_equal(report.batches[0].mean_reward, standalone.mean_reward)
        assert np.array_equal(
            report.batches[0].mean_total_distance, standalone.mean_total_distance
        )

    def test_report_shapes(self, world3):
        scales = (0.0, 0.05, 0.1)
        report = run_sweep(world3, small_cfg(world3, runs=5), scales)
        assert report.scales == scales
        assert len(report.stats) == 3
        for curve in (report.norm_total, report.norm_min, report.norm_count):
            assert len(curve) == 3
            assert np.all((curve >= 0) & (curve <= 1))

    def test_selected_scale_respects_filter(self, world3):
        report = run_sweep(world3, small_cfg(world3, runs=30), (0.0, 0.08, 0.3))
        baseline = report.stats[0].max_success_rate
        chosen = next(st for st in report.stats if st.scale == report.selected_scale)
        assert chosen.max_success_rate >= baseline - report.filter_threshold_pp
