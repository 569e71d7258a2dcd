import pytest

from qsd.grid_env import (
    InvalidEnvironmentError,
    StepKind,
    cell_coords,
    cell_label,
    distance_matrix,
    initial_state,
    is_terminal,
    new_grid,
    state_index,
    step,
)


@pytest.fixture
def world3():
    return new_grid(3, {4})


@pytest.fixture
def world4():
    return new_grid(4, {5, 6, 9, 10})


class TestNewGrid:
    def test_3x3_center_object(self, world3):
        assert world3.n_free == 8
        assert world3.n_states == 256
        assert world3.free_cells == (0, 1, 2, 3, 5, 6, 7, 8)

    def test_4x4_center_block(self, world4):
        assert world4.n_free == 12
        assert world4.n_states == 4096

    def test_2x2_no_objects(self):
        w = new_grid(2, set())
        assert w.n_free == 4
        assert w.n_states == 16

    def test_object_out_of_range(self):
        with pytest.raises(InvalidEnvironmentError):
            new_grid(3, {9})

    def test_all_cells_objects(self):
        with pytest.raises(InvalidEnvironmentError):
            new_grid(2, {0, 1, 2, 3})

    def test_side_too_small(self):
        with pytest.raises(InvalidEnvironmentError):
            new_grid(1, set())


class TestInitialState:
    @pytest.mark.parametrize("side,objects,bits", [
        (3, {4}, 8),
        (4, {5, 6, 9, 10}, 12),
        (2, set(), 4),
    ])
    def test_all_unclean(self, side, objects, bits):
        w = new_grid(side, objects)
        s = initial_state(w)
        assert s.mask == 0
        assert s.bits() == "0" * bits


class TestStep:
    def test_clean_first_cell(self, world3):
        out = step(world3, initial_state(world3), 0)
        assert out.kind is StepKind.CLEANED
        assert out.reward == 1.0
        assert out.next_state.mask == 1

    def test_object_hit_keeps_state(self, world3):
        s = initial_state(world3)
        out = step(world3, s, 4)
        assert out.kind is StepKind.OBJECT_HIT
        assert out.reward == -1.0
        assert out.next_state == s

    def test_redundant_clean(self, world3):
        s = step(world3, initial_state(world3), 0).next_state
        out = step(world3, s, 0)
        assert out.kind is StepKind.REDUNDANT
        assert out.reward == -0.01
        assert out.next_state == s

    def test_action_out_of_range(self, world3):
        with pytest.raises(IndexError):
            step(world3, initial_state(world3), 9)

    def test_monotone_and_reward_closure_exhaustive(self, world3):
        # every (state, action): clean set never shrinks, rewards closed
        from qsd.grid_env import CleanState
        for mask in range(world3.n_states):
            s = CleanState(mask=mask, n_bits=8)
            for a in range(9):
                out = step(world3, s, a)
                assert out.next_state.mask & mask == mask
                assert out.reward in (1.0, -1.0, -0.01)

    def test_terminal_absorbing(self, world3):
        from qsd.grid_env import CleanState
        term = CleanState(mask=world3.full_mask, n_bits=8)
        for a in range(9):
            out = step(world3, term, a)
            assert out.kind is not StepKind.CLEANED
            assert out.next_state == term


class TestTerminalAndIndex:
    def test_terminal_3x3(self, world3):
        from qsd.grid_env import CleanState
        assert is_terminal(world3, CleanState(mask=255, n_bits=8))
        assert not is_terminal(world3, CleanState(mask=254, n_bits=8))

    def test_terminal_2x2(self):
        from qsd.grid_env import CleanState
        w = new_grid(2, set())
        assert is_terminal(w, CleanState(mask=15, n_bits=4))

    def test_state_index_examples(self, world3):
        from qsd.grid_env import CleanState
        assert state_index(world3, CleanState(mask=0, n_bits=8)) == 0
        only_first = step(world3, initial_state(world3), 0).next_state
        assert state_index(world3, only_first) == 1
        assert state_index(world3, CleanState(mask=255, n_bits=8)) == 255

    def test_state_index_bijection(self, world3):
        from qsd.grid_env import CleanState
        seen = {state_index(world3, CleanState(mask=m, n_bits=8))
                for m in range(world3.n_states)}
        assert seen == set(range(256))


class TestCoords:
    @pytest.mark.parametrize("side,cell,expected", [
        (3, 0, (0, 0)),
        (3, 8, (2, 2)),
        (4, 5, (1, 1)),
    ])
    def test_examples(self, side, cell, expected):
        objects = {4} if side == 3 else set()
        assert cell_coords(new_grid(side, objects), cell) == expected

    def test_out_of_range(self, world3):
        with pytest.raises(IndexError):
            cell_coords(world3, 9)

    def test_labels_are_one_based(self):
        assert cell_label(0) == "g1"
        assert cell_label(8) == "g9"


@pytest.mark.parametrize("side,objects,expected", [
    (2, set(), 16),
    (3, {4}, 256),
])
def test_reachability_bfs(side, objects, expected):
    # from the initial state, exactly 2^free states are reachable
    w = new_grid(side, objects)
    seen = {0}
    frontier = [0]
    while frontier:
        mask = frontier.pop()
        from qsd.grid_env import CleanState
        s = CleanState(mask=mask, n_bits=w.n_free)
        for a in range(w.n_cells):
            nxt = step(w, s, a).next_state.mask
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    assert len(seen) == expected


def test_distance_matrix_matches_coords(world3):
    dm = distance_matrix(world3)
    assert dm[0][0] == 0.0
    assert dm[0][1] == 1.0
    assert dm[0][8] == pytest.approx(2 * 2 ** 0.5, abs=1e-15)
