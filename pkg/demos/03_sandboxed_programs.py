# The transform-program sandbox. Models hand back a Python-like function
# as a single line of text; a dedicated parser and interpreter run it with
# a step budget and no access to anything beyond the builtin table, so a
# hostile or buggy program can only ever produce a structured error.

from arcagents import ExecError, ExecLimits, parse_program, run_program

# Programs arrive flat (all statements on one line) or with escaped
# newlines and tabs; both parse to the same thing.
flat = (
    "def transform_grid(grid): objects = get_objects(grid) "
    "new_grid = empty_grid(len(objects), len(objects)) "
    "for i, obj in enumerate(objects): "
    "new_grid = fill_value(new_grid, (i, i), get_object_color(obj)) "
    "return new_grid"
)
escaped = (
    "def transform_grid(grid):\\n\\tobjects = get_objects(grid)\\n"
    "\\tnew_grid = empty_grid(len(objects), len(objects))\\n"
    "\\tfor i, obj in enumerate(objects):\\n"
    "\\t\\tnew_grid = fill_value(new_grid, (i, i), get_object_color(obj))\\n"
    "\\treturn new_grid"
)

grid = [[".", "h", "."], [".", ".", "."], ["h", "h", "."]]
print("flat form:   ", run_program(flat, grid))
print("escaped form:", run_program(escaped, grid))

# The error taxonomy: parse, unknown_name, type_mismatch, index_range,
# domain, fuel_exhausted, output_invalid. Each failure renders a message
# the feedback loop can quote back to the model.
failures = [
    "def transform_grid(grid): import os",
    "def transform_grid(grid): return magic(grid)",
    "def transform_grid(grid): return grid + 1",
    "def transform_grid(grid): return grid[9]",
    "def transform_grid(grid): return rotate_clockwise(grid, 45)",
    "def transform_grid(grid): return 7",
]
print()
for text in failures:
    try:
        run_program(text, grid)
    except ExecError as err:
        print(f"{err.kind:15s} {err.message}")

# Runaway loops hit the fuel limit instead of hanging.
loop = "def transform_grid(grid): for i in range(1000000): x = 1 return grid"
try:
    run_program(loop, grid, ExecLimits(fuel=2000))
except ExecError as err:
    print(f"{err.kind:15s} {err.message}")

# try/except works over the taxonomy, so programs can recover: an
# out-of-range crop surfaces as an index error and is caught here.
recovering = (
    "def transform_grid(grid): "
    "try: out = crop_grid(grid, (5, 5), (8, 8)) "
    "except IndexError: out = grid "
    "return out"
)
print("\nrecovered:", run_program(recovering, [["a"]]))

# Parsed programs can be reused; the AST carries the decoded source.
program = parse_program(flat)
print("parsed parameter:", program.param)
