# Tour of the task model and the three text abstraction views.
#
# A task is a set of demonstration input/output grids plus test inputs.
# Grids hold colors 0-9; before anything reaches a model they are recoded
# as characters ('.' for background, 'a'..'i' for colors 1..9) so the text
# looks nothing like arithmetic.

import json

from arcagents import (
    grid_to_chars,
    load_task,
    render_grid_view,
    render_object_view,
    render_pixel_view,
    get_objects,
    ObjectViewConfig,
)

task_doc = {
    "train": [
        {"input": [[0, 0, 6], [0, 4, 6], [3, 4, 6]],
         "output": [[0, 0, 6], [0, 4, 6], [6, 4, 6]]},
    ],
    "test": [{"input": [[0, 0, 5], [0, 4, 5], [3, 4, 5]], "output": [[0, 0, 5], [0, 4, 5], [5, 4, 5]]}],
}
task = load_task(json.dumps(task_doc), task_id="demo")
grid = task.train[0].input

print("numeric grid:", grid)
print("character encoding:", grid_to_chars(grid))

# Grid View: the whole grid as a nested char-array literal.
print("\ngrid view:   ", render_grid_view(grid))

# Object View: contiguous same-color cells grouped, with top-left corner,
# tight sub-grid and (optionally) size, cell count and shape.
mono = ObjectViewConfig("mono", "none", more_info=True)
print("object view: ", render_object_view(grid, mono))

# Pixel View: each color mapped to its coordinates, most pixels first.
print("pixel view:  ", render_pixel_view(grid))

# Object extraction comes in ten variants: mono/multi color crossed with
# none/row/col/color/diag grouping. Compare mono vs multi on a touching
# two-color shape:
chars = [["a", "b"], [".", "b"]]
print("\nmono objects: ", get_objects(chars, more_info=False))
print("multi objects:", get_objects(chars, multicolor=True, more_info=False))

# Enclosed background becomes its own '$' object (a hole):
ring = [["a", "a", "a"], ["a", ".", "a"], ["a", "a", "a"]]
print("\nring with hole:", get_objects(ring, more_info=False))
