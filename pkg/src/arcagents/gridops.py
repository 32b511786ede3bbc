"""Primitive and conditional grid functions: the grounded action space that
model-generated transform programs call.

All functions take and return plain ``list[list[str]]`` character grids or
plain-dict objects (``{'tl': (r, c), 'grid': [...]}``) and never mutate
their arguments. Cells are '.', 'a'..'i', or '$' ('$' marks enclosed empty
cells inside extracted objects and is treated as transparent by paint ops).
"""

from .taskmodel import BACKGROUND, HOLE, MAX_SIDE, CharGrid

Coord = tuple[int, int]
ArcObject = dict

FILL_CHARS = frozenset(".abcdefghi")
COLOR_ONLY = frozenset("abcdefghi")
LINE_TYPES = ("row", "col", "diag")


class GridOpError(ValueError):
    """Base error for primitive functions; carries a machine-readable code."""

    code = "grid_op"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class BadCoords(GridOpError):
    code = "bad_coords"


class BadDimensions(GridOpError):
    code = "bad_dimensions"


class AllBlank(GridOpError):
    code = "all_blank"


class BadDegree(GridOpError):
    code = "bad_degree"


class ShapeMismatch(GridOpError):
    code = "shape_mismatch"


class BadColor(GridOpError):
    code = "bad_color"


class NotALine(GridOpError):
    code = "not_a_line"


class BadLineType(GridOpError):
    code = "bad_line_type"


def _clone(grid: CharGrid) -> CharGrid:
    return [list(row) for row in grid]


def _coord(value, what: str = "coordinate") -> Coord:
    if (
        isinstance(value, (tuple, list))
        and len(value) == 2
        and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        return (value[0], value[1])
    raise BadCoords(f"{what} must be a (row,col) pair of integers, got {value!r}")


def _check_fill_value(value) -> str:
    if not isinstance(value, str) or len(value) != 1 or value not in FILL_CHARS:
        raise BadColor(f"fill value must be one of '.','a'..'i', got {value!r}")
    return value


def get_size(grid: CharGrid) -> tuple[int, int]:
    """(rows, cols) of a grid."""
    if not grid:
        return (0, 0)
    return (len(grid), len(grid[0]))


def empty_grid(row: int, col: int) -> CharGrid:
    """All-background grid of the given height and width."""
    for v in (row, col):
        if not isinstance(v, int) or isinstance(v, bool):
            raise BadDimensions(f"grid dimensions must be integers, got {v!r}")
    if not (1 <= row <= MAX_SIDE and 1 <= col <= MAX_SIDE):
        raise BadDimensions(f"grid dimensions must be 1..{MAX_SIDE}, got ({row},{col})")
    return [[BACKGROUND] * col for _ in range(row)]


def crop_grid(grid: CharGrid, tl, br) -> CharGrid:
    """Inclusive sub-rectangle from tl to br; br is clamped to the grid."""
    tl = _coord(tl, "tl")
    br = _coord(br, "br")
    rows, cols = get_size(grid)
    if tl[0] > br[0] or tl[1] > br[1]:
        raise BadCoords(f"tl {tl} must not exceed br {br}")
    if not (0 <= tl[0] < rows and 0 <= tl[1] < cols):
        raise BadCoords(f"tl {tl} outside {rows}x{cols} grid")
    r1 = min(br[0], rows - 1)
    c1 = min(br[1], cols - 1)
    return [row[tl[1] : c1 + 1] for row in grid[tl[0] : r1 + 1]]


def tight_fit(grid: CharGrid) -> CharGrid:
    """Drop every all-blank row and column, interior ones included."""
    rows, cols = get_size(grid)
    keep_rows = [r for r in range(rows) if any(grid[r][c] != BACKGROUND for c in range(cols))]
    keep_cols = [c for c in range(cols) if any(grid[r][c] != BACKGROUND for r in range(rows))]
    if not keep_rows or not keep_cols:
        raise AllBlank("grid has no non-blank cell to fit around")
    return [[grid[r][c] for c in keep_cols] for r in keep_rows]


def combine_object(obj_1: ArcObject, obj_2: ArcObject) -> ArcObject:
    """Union of two objects on their joint bounding box; obj_2 paints last."""
    t1 = _coord(obj_1["tl"], "obj_1 tl")
    t2 = _coord(obj_2["tl"], "obj_2 tl")
    s1 = get_size(obj_1["grid"])
    s2 = get_size(obj_2["grid"])
    tl = (min(t1[0], t2[0]), min(t1[1], t2[1]))
    rows = max(t1[0] + s1[0], t2[0] + s2[0]) - tl[0]
    cols = max(t1[1] + s1[1], t2[1] + s2[1]) - tl[1]
    canvas = [[BACKGROUND] * cols for _ in range(rows)]
    for origin, obj in ((t1, obj_1), (t2, obj_2)):
        for r, row in enumerate(obj["grid"]):
            for c, cell in enumerate(row):
                if cell not in (BACKGROUND, HOLE):
                    canvas[origin[0] - tl[0] + r][origin[1] - tl[1] + c] = cell
    return {"tl": tl, "grid": canvas}


def rotate_clockwise(grid: CharGrid, degree: int = 90) -> CharGrid:
    """Rotate by 90, 180 or 270 degrees clockwise."""
    if degree not in (90, 180, 270):
        raise BadDegree(f"degree must be 90, 180 or 270, got {degree!r}")
    out = _clone(grid)
    for _ in range(degree // 90):
        out = [list(col) for col in zip(*out[::-1])]
    return out


def horizontal_flip(grid: CharGrid) -> CharGrid:
    """Mirror left-right."""
    return [row[::-1] for row in grid]


def vertical_flip(grid: CharGrid) -> CharGrid:
    """Mirror top-bottom."""
    return [list(row) for row in grid[::-1]]


def replace(grid: CharGrid, grid_1: CharGrid, grid_2: CharGrid) -> CharGrid:
    """Overwrite every occurrence of grid_1 with grid_2.

    Scan is row-major and matches never overlap cells consumed by an
    earlier match. grid_1 and grid_2 must have identical dimensions.
    """
    rows, cols = get_size(grid)
    prow, pcol = get_size(grid_1)
    if (prow, pcol) != get_size(grid_2):
        raise ShapeMismatch("pattern and replacement must have identical dimensions")
    if prow == 0 or prow > rows or pcol > cols:
        raise ShapeMismatch("pattern must fit inside the grid")
    out = _clone(grid)
    consumed = [[False] * cols for _ in range(rows)]
    for r in range(rows - prow + 1):
        for c in range(cols - pcol + 1):
            window_free = all(
                not consumed[r + i][c + j] for i in range(prow) for j in range(pcol)
            )
            if not window_free:
                continue
            if all(out[r + i][c + j] == grid_1[i][j] for i in range(prow) for j in range(pcol)):
                for i in range(prow):
                    for j in range(pcol):
                        out[r + i][c + j] = grid_2[i][j]
                        consumed[r + i][c + j] = True
    return out


def get_object_color(obj: ArcObject) -> str:
    """First non-background, non-hole cell in row-major order ('$' if none)."""
    for row in obj["grid"]:
        for cell in row:
            if cell not in (BACKGROUND, HOLE):
                return cell
    return HOLE


def change_object_color(obj: ArcObject, value: str) -> ArcObject:
    """Recolor every filled cell of the object to value."""
    if not isinstance(value, str) or value not in COLOR_ONLY:
        raise BadColor(f"object color must be one of 'a'..'i', got {value!r}")
    grid = [
        [value if cell not in (BACKGROUND, HOLE) else cell for cell in row]
        for row in obj["grid"]
    ]
    out = dict(obj)
    out["grid"] = grid
    return out


def fill_object(grid: CharGrid, obj: ArcObject, align: bool = False) -> CharGrid:
    """Paint the object onto the grid at its tl offset.

    Cells landing outside the grid are skipped. With align=True the result
    is a fresh grid exactly the object's size with the object at (0,0).
    """
    src = obj["grid"]
    if align:
        return [
            [cell if cell not in (BACKGROUND, HOLE) else BACKGROUND for cell in row]
            for row in src
        ]
    tl = _coord(obj["tl"], "object tl")
    rows, cols = get_size(grid)
    out = _clone(grid)
    for r, row in enumerate(src):
        for c, cell in enumerate(row):
            if cell in (BACKGROUND, HOLE):
                continue
            rr, cc = tl[0] + r, tl[1] + c
            if 0 <= rr < rows and 0 <= cc < cols:
                out[rr][cc] = cell
    return out


def fill_row(grid: CharGrid, row_num: int, value: str, start_col: int = 0, end_col: int = 30) -> CharGrid:
    """Fill one row with value from start_col to end_col inclusive (clamped)."""
    value = _check_fill_value(value)
    rows, cols = get_size(grid)
    if not isinstance(row_num, int) or not 0 <= row_num < rows:
        raise BadCoords(f"row {row_num!r} outside 0..{rows - 1}")
    out = _clone(grid)
    for c in range(max(0, start_col), min(end_col, cols - 1) + 1):
        out[row_num][c] = value
    return out


def fill_col(grid: CharGrid, col_num: int, value: str, start_row: int = 0, end_row: int = 30) -> CharGrid:
    """Fill one column with value from start_row to end_row inclusive (clamped)."""
    value = _check_fill_value(value)
    rows, cols = get_size(grid)
    if not isinstance(col_num, int) or not 0 <= col_num < cols:
        raise BadCoords(f"col {col_num!r} outside 0..{cols - 1}")
    out = _clone(grid)
    for r in range(max(0, start_row), min(end_row, rows - 1) + 1):
        out[r][col_num] = value
    return out


def fill_between_coords(grid: CharGrid, coord_1, coord_2, value: str) -> CharGrid:
    """Fill the inclusive segment between two coords sharing a row, column
    or exact 45-degree diagonal with value."""
    value = _check_fill_value(value)
    c1 = _coord(coord_1, "coord_1")
    c2 = _coord(coord_2, "coord_2")
    rows, cols = get_size(grid)
    for pt in (c1, c2):
        if not (0 <= pt[0] < rows and 0 <= pt[1] < cols):
            raise BadCoords(f"coordinate {pt} outside {rows}x{cols} grid")
    dr = c2[0] - c1[0]
    dc = c2[1] - c1[1]
    if not (dr == 0 or dc == 0 or abs(dr) == abs(dc)):
        raise NotALine(f"{c1} and {c2} share no row, column or diagonal")
    steps = max(abs(dr), abs(dc))
    sr = (dr > 0) - (dr < 0)
    sc = (dc > 0) - (dc < 0)
    out = _clone(grid)
    for i in range(steps + 1):
        out[c1[0] + sr * i][c1[1] + sc * i] = value
    return out


def fill_rect(grid: CharGrid, tl, br, value: str) -> CharGrid:
    """Fill the inclusive rectangle from tl to br with value (br clamped)."""
    value = _check_fill_value(value)
    tl = _coord(tl, "tl")
    br = _coord(br, "br")
    rows, cols = get_size(grid)
    if tl[0] > br[0] or tl[1] > br[1]:
        raise BadCoords(f"tl {tl} must not exceed br {br}")
    if not (0 <= tl[0] < rows and 0 <= tl[1] < cols):
        raise BadCoords(f"tl {tl} outside {rows}x{cols} grid")
    out = _clone(grid)
    for r in range(tl[0], min(br[0], rows - 1) + 1):
        for c in range(tl[1], min(br[1], cols - 1) + 1):
            out[r][c] = value
    return out


def fill_value(grid: CharGrid, pos, value: str) -> CharGrid:
    """Set a single cell."""
    value = _check_fill_value(value)
    pos = _coord(pos, "pos")
    rows, cols = get_size(grid)
    if not (0 <= pos[0] < rows and 0 <= pos[1] < cols):
        raise BadCoords(f"position {pos} outside {rows}x{cols} grid")
    out = _clone(grid)
    out[pos[0]][pos[1]] = value
    return out


def object_contains_color(obj: ArcObject, value: str) -> bool:
    """True if any cell of the object grid equals value."""
    return any(value in row for row in obj["grid"])


def on_same_line(coord_1, coord_2, line_type: str) -> bool:
    """True if the coords share a row, column or diagonal per line_type."""
    c1 = _coord(coord_1, "coord_1")
    c2 = _coord(coord_2, "coord_2")
    if line_type == "row":
        return c1[0] == c2[0]
    if line_type == "col":
        return c1[1] == c2[1]
    if line_type == "diag":
        return abs(c1[0] - c2[0]) == abs(c1[1] - c2[1])
    raise BadLineType(f"line_type must be one of {list(LINE_TYPES)}, got {line_type!r}")
