"""Tour of the cleaning gridworld: cells, rewards, and the state bitmask.

Run: python3 demos/01_environment_tour.py
"""
from qsd.grid_env import (
    CleanState,
    cell_coords,
    cell_label,
    initial_state,
    is_terminal,
    new_grid,
    step,
)

world = new_grid(3, {4})
print(f"{world.side}x{world.side} grid, {world.n_cells} cells, "
      f"object cells {sorted(world.object_cells)}, "
      f"{world.n_free} free cells to clean\n")

print("Layout (0-based indices, * marks an object):")
for row in range(world.side):
    cells = []
    for col in range(world.side):
        idx = row * world.side + col
        mark = "*" if idx in world.object_cells else " "
        cells.append(f"{cell_label(idx)}{mark}")
    print("  " + "  ".join(cells))

state = initial_state(world)
print(f"\nInitial state mask: {state.mask:#010b} (no cell cleaned yet)")

# Clean a free cell, bump the object, then revisit the cleaned cell.
for action, story in ((0, "clean the top-left corner"),
                      (4, "bump into the object"),
                      (0, "revisit an already-clean cell")):
    out = step(world, state, action)
    r, c = cell_coords(world, action)
    print(f"go to {cell_label(action)} at (row {r}, col {c}) -- {story}: "
          f"reward {out.reward:+.2f}, kind {out.kind.name}, "
          f"mask {out.next_state.mask:#010b}")
    state = out.next_state

# Visit every remaining free cell to reach the terminal state.
for action in world.free_cells:
    state = step(world, state, action).next_state
assert is_terminal(world, state)
print(f"\nAfter visiting every free cell the mask is {state.mask:#010b} "
      f"-> terminal: {is_terminal(world, state)}")
print(f"State space size: 2**{world.n_free} = {2 ** world.n_free} masks")
