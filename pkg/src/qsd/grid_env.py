"""Table-cleaning environment on a square grid with static object cells.

The table is discretized into ``side * side`` cells. A subset of cells
holds objects and can never be cleaned; the rest are free. A state is a
bitmask over the free cells (bit set = clean). Actions are cell indices:
cleaning an unclean free cell earns +1, attempting an object cell earns
-1 and leaves the state unchanged, re-cleaning a clean cell earns -0.01.
The episode goal is the all-bits-set mask.

Everything here is stateless-functional: ``step`` returns a new state and
callers own the current one, so exhaustive enumeration and parallel runs
need no copying discipline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

REWARD_CLEAN = 1.0
REWARD_OBJECT = -1.0
REWARD_REDUNDANT = -0.01


class InvalidEnvironmentError(ValueError):
    """Raised when a grid description cannot form a usable environment."""


class StepKind(Enum):
    CLEANED = "cleaned"
    OBJECT_HIT = "object_hit"
    REDUNDANT = "redundant"


@dataclass(frozen=True)
class GridWorld:
    """Static geometry of one table: side length plus the object mask.

    ``free_cells`` is ascending, and bit ``i`` of a state mask refers to
    ``free_cells[i]``; that ordering makes state indices count up in
    binary over the free cells.
    """

    side: int
    object_cells: frozenset[int]
    free_cells: tuple[int, ...]
    cell_size: float = 1.0
    # cell index -> bit position, -1 for object cells
    _bit_of: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def n_cells(self) -> int:
        return self.side * self.side

    @property
    def n_free(self) -> int:
        return len(self.free_cells)

    @property
    def n_states(self) -> int:
        return 1 << self.n_free

    @property
    def full_mask(self) -> int:
        return (1 << self.n_free) - 1

    def bit_of(self, cell: int) -> int:
        """Bit position of a free cell, or -1 for an object cell."""
        return self._bit_of[cell]


@dataclass(frozen=True)
class CleanState:
    """Cleanliness bitmask: bit i set means the i-th free cell is clean."""

    mask: int
    n_bits: int

    def bits(self) -> str:
        """Bitstring, lowest free cell first."""
        return format(self.mask, f"0{self.n_bits}b")[::-1]


@dataclass(frozen=True)
class StepOutcome:
    next_state: CleanState
    reward: float
    kind: StepKind


def new_grid(side: int, object_cells: Iterable[int]) -> GridWorld:
    """Build a world from a side length and the object cell indices."""
    if side < 2:
        raise InvalidEnvironmentError(f"side must be >= 2, got {side}")
    n = side * side
    objects = frozenset(int(c) for c in object_cells)
    for c in objects:
        if not 0 <= c < n:
            raise InvalidEnvironmentError(
                f"object cell {c} out of range for a {side}x{side} grid"
            )
    free = tuple(c for c in range(n) if c not in objects)
    if not free:
        raise InvalidEnvironmentError("every cell holds an object; nothing to clean")
    bit_of = [-1] * n
    for i, c in enumerate(free):
        bit_of[c] = i
    return GridWorld(
        side=side,
        object_cells=objects,
        free_cells=free,
        _bit_of=tuple(bit_of),
    )


def initial_state(world: GridWorld) -> CleanState:
    """All free cells unclean."""
    return CleanState(mask=0, n_bits=world.n_free)


def apply_action(world: GridWorld, mask: int, action: int) -> tuple[int, float, StepKind]:
    """Core transition on a raw mask; shared by step() and the hot loops."""
    bit = world._bit_of[action]
    if bit < 0:
        return mask, REWARD_OBJECT, StepKind.OBJECT_HIT
    if mask >> bit & 1:
        return mask, REWARD_REDUNDANT, StepKind.REDUNDANT
    return mask | (1 << bit), REWARD_CLEAN, StepKind.CLEANED


def step(world: GridWorld, state: CleanState, action: int) -> StepOutcome:
    """Apply one cleaning action. Total and deterministic for valid actions."""
    if not 0 <= action < world.n_cells:
        raise IndexError(f"action {action} out of range [0, {world.n_cells})")
    mask, reward, kind = apply_action(world, state.mask, action)
    if mask == state.mask:
        nxt = state
    else:
        nxt = CleanState(mask=mask, n_bits=state.n_bits)
    return StepOutcome(next_state=nxt, reward=reward, kind=kind)


def is_terminal(world: GridWorld, state: CleanState) -> bool:
    return state.mask == world.full_mask


def state_index(world: GridWorld, state: CleanState) -> int:
    """Dense row index for the value table; the mask itself, since bit i
    weighs 2**i over ascending free cells."""
    return state.mask


def cell_coords(world: GridWorld, cell: int) -> tuple[int, int]:
    """(row, col) of a 0-based cell index."""
    if not 0 <= cell < world.n_cells:
        raise IndexError(f"cell {cell} out of range [0, {world.n_cells})")
    return cell // world.side, cell % world.side


def cell_label(cell: int) -> str:
    """Human-facing 1-based label, e.g. cell 0 -> 'g1'."""
    return f"g{cell + 1}"


def distance_matrix(world: GridWorld) -> list[list[float]]:
    """Pairwise Euclidean distances between cell centers, grid-edge units."""
    n = world.n_cells
    coords = [cell_coords(world, c) for c in range(n)]
    out = [[0.0] * n for _ in range(n)]
    for a in range(n):
        ra, ca = coords[a]
        for b in range(n):
            rb, cb = coords[b]
            out[a][b] = math.sqrt((ra - rb) ** 2 + (ca - cb) ** 2)
    return out
