# Tour of the primitive function library: the grounded action space that
# generated transform programs call. Everything is pure; inputs are never
# mutated, and rule violations raise coded errors that the feedback loop
# can show to the model.

from arcagents import (
    combine_object,
    crop_grid,
    empty_grid,
    fill_between_coords,
    fill_object,
    fill_rect,
    fill_row,
    fill_value,
    get_object_color,
    horizontal_flip,
    object_contains_color,
    on_same_line,
    replace,
    rotate_clockwise,
    tight_fit,
    vertical_flip,
)
from arcagents.gridops import GridOpError

canvas = empty_grid(3, 4)
print("empty 3x4:", canvas)

# Fills: single cells, rows, rectangles, line segments (rows, columns and
# exact diagonals only).
canvas = fill_value(canvas, (0, 0), "a")
canvas = fill_row(canvas, 1, "b", start_col=1)
canvas = fill_rect(canvas, (2, 2), (2, 3), "c")
print("after fills:", canvas)
print("diagonal:", fill_between_coords(empty_grid(3, 3), (0, 0), (2, 2), "e"))

# Geometry: rotations and flips compose the dihedral group.
grid = [["a", "b"], ["d", "e"]]
print("\nrot90: ", rotate_clockwise(grid, 90))
print("rot180:", rotate_clockwise(grid, 180))
print("hflip: ", horizontal_flip(grid))
print("vflip then hflip equals rot180:",
      vertical_flip(horizontal_flip(grid)) == rotate_clockwise(grid, 180))

# Pattern replacement scans row-major without overlapping earlier matches.
print("\nreplace:", replace([["a", "a", "a", "a"]], [["a", "a"]], [["b", "c"]]))

# tight_fit removes all blank rows and columns, interior ones included.
print("tight_fit:", tight_fit([[".", ".", "."], [".", "a", "."], [".", ".", "."]]))

# Objects are dicts with a top-left coordinate and a tight sub-grid; you
# can build them by hand, recolor them, merge them and paint them.
obj = {"tl": (0, 1), "grid": [["c"], ["c"]]}
print("\npaint object:", fill_object(empty_grid(2, 2), obj))
merged = combine_object({"tl": (0, 0), "grid": [["a", "a"], ["a", "."]]},
                        {"tl": (1, 1), "grid": [["f"]]})
print("combined:", merged)
print("its color:", get_object_color(merged))

# Conditional helpers drive branching in generated programs.
print("\ncontains 'f'?", object_contains_color(merged, "f"))
print("(1,2) and (2,1) on a diagonal?", on_same_line((1, 2), (2, 1), "diag"))

# Violations raise coded errors rather than silently guessing.
try:
    crop_grid(grid, (5, 5), (6, 6))
except GridOpError as err:
    print("\ncrop outside the grid ->", f"{err.code}: {err.message}")
