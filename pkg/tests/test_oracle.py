import json
from pathlib import Path

import numpy as np
import pytest

from qsd.grid_env import new_grid
from qsd.learner import LearnerConfig, run_training
from qsd.oracle import (
    OracleSizeError,
    brute_force_min_distance,
    reference_q_learning,
    reference_training,
)

CONSTANTS = json.loads(
    (Path(__file__).resolve().parent.parent / "oracle_constants.json").read_text()
)


class TestBruteForce:
    def test_2x2_open_grid(self):
        result = brute_force_min_distance(new_grid(2, set()), method="permutation")
        assert result.min_distance == pytest.approx(3.0)
        assert result.orders_examined == 24
        assert sorted(result.optimal_order) == [0, 1, 2, 3]

    def test_single_free_cell(self):
        world = new_grid(2, {1, 2, 3})
        result = brute_force_min_distance(world)
        assert result.min_distance == 0.0
        assert result.optimal_order == (0,)

    def test_3x3_pinned_constant(self):
        pinned = CONSTANTS["3x3_center"]
        result = brute_force_min_distance(new_grid(3, {4}), method="permutation")
        assert result.min_distance == pytest.approx(pinned["min_distance"], abs=1e-12)
        assert result.orders_examined == 40320

    def test_dp_agrees_with_permutations(self):
        for world in (new_grid(2, set()), new_grid(3, {4})):
            perm = brute_force_min_distance(world, method="permutation")
            dp = brute_force_min_distance(world, method="dp")
            assert dp.min_distance == pytest.approx(perm.min_distance, abs=1e-12)

    def test_4x4_pinned_constant_via_dp(self):
        pinned = CONSTANTS["4x4_center_block"]
        result = brute_force_min_distance(new_grid(4, {5, 6, 9, 10}), method="dp")
        assert result.min_distance == pytest.approx(pinned["min_distance"], abs=1e-12)

    def test_enumeration_order_independent(self):
        # reversing the cell order cannot change the minimum
        world = new_grid(3, {4})
        forward = brute_force_min_distance(world, method="dp")
        from dataclasses import replace
        reversed_world = replace(world, free_cells=world.free_cells[::-1])
        backward = brute_force_min_distance(reversed_world, method="dp")
        assert backward.min_distance == pytest.approx(forward.min_distance, abs=1e-12)

    def test_permutation_size_guard(self):
        world = new_grid(4, {5, 6, 9, 10})  # 12 free cells
        with pytest.raises(OracleSizeError):
            brute_force_min_distance(world, method="permutation")

    def test_optimal_order_visits_each_cell_once(self):
        world = new_grid(3, {4})
        result = brute_force_min_distance(world)
        assert sorted(result.optimal_order) == sorted(world.free_cells)

    def test_start_cell_charges_first_move(self):
        world = new_grid(2, set())
        free = brute_force_min_distance(world)
        homed = brute_force_min_distance(world, start=0)
        assert homed.min_distance >= free.min_distance


class TestReference:
    def test_alpha_epsilon_zero_table_stays_zero(self):
        world = new_grid(3, {4})
        # alpha at the open-interval floor is invalid; use tiny alpha = no-op proxy
        cfg = LearnerConfig.for_world(world, alpha=1e-12, epsilon=0.0,
                                      episodes_per_run=5, runs=1)
        q = reference_q_learning(world, cfg)
        assert np.allclose(q, 0.0, atol=1e-10)

    def test_single_transition_direct_substitution(self):
        # alpha=1, gamma=0: Q(s,a) becomes exactly r after one visit
        world = new_grid(2, set())
        cfg = LearnerConfig.for_world(world, alpha=1.0, gamma=0.0, epsilon=0.0,
                                      max_iterations=1, episodes_per_run=1, runs=1)
        q = reference_q_learning(world, cfg)
        assert q[0, 0] == 1.0

    @pytest.mark.parametrize("side,objects", [(2, frozenset()), (3, frozenset({4}))])
    def test_engine_matches_reference_bit_exact(self, side, objects):
        world = new_grid(side, objects)
        for seed in range(10):
            cfg = LearnerConfig.for_world(world, scale=0.0, seed=seed,
                                          episodes_per_run=40, runs=1)
            engine = run_training(world, cfg, run_index=0)
            reference = reference_training(world, cfg, run_index=0)
            assert np.array_equal(engine.final_q, reference.final_q)
            assert np.array_equal(engine.rewards, reference.rewards)
            assert np.array_equal(engine.distances, reference.distances)
            assert np.array_equal(engine.iterations, reference.iterations)
            assert np.array_equal(engine.successes, reference.successes)


def test_successful_episodes_never_beat_oracle():
    world = new_grid(3, {4})
    floor = CONSTANTS["3x3_center"]["min_distance"]
    cfg = LearnerConfig.for_world(world, seed=7, episodes_per_run=100, runs=1)
    for i in range(20):
        series = run_training(world, cfg, run_index=i)
        ok = series.successes
        assert np.all(series.distances[ok] >= floor - 1e-9)
