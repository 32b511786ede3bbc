"""Object extraction and pixel-coordinate indexing over character grids.

Objects are groups of non-background cells selected by a color mode
(mono: same color only; multi: any color) crossed with a grouping
constraint (none, row, col, color, diag), ten combinations in all. Each
object is a plain dict with 'tl' (top-left of its bounding box) and
'grid' (tight bounding box, non-members blanked); with more_info it also
carries 'size', 'cell_count' and 'shape'. Background regions sealed off
by a single object are emitted as their own objects made of '$' cells.
"""

from dataclasses import dataclass

from .taskmodel import BACKGROUND, HOLE, CharGrid
from .gridops import ArcObject, Coord

COLOR_MODES = ("mono", "multi")
CONSTRAINTS = ("none", "row", "col", "color", "diag")

_ORTHO = ((-1, 0), (1, 0), (0, -1), (0, 1))
_DIAGS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True)
class ObjectViewConfig:
    color_mode: str = "mono"
    constraint: str = "none"
    more_info: bool = True

    def __post_init__(self):
        if self.color_mode not in COLOR_MODES:
            raise ValueError(f"color_mode must be one of {COLOR_MODES}")
        if self.constraint not in CONSTRAINTS:
            raise ValueError(f"constraint must be one of {CONSTRAINTS}")

    @property
    def label(self) -> str:
        return f"{self.color_mode}-{self.constraint}"


def all_object_view_configs(more_info: bool = True) -> list[ObjectViewConfig]:
    """The ten (color mode x constraint) extraction variants, stable order."""
    return [
        ObjectViewConfig(mode, constraint, more_info)
        for mode in COLOR_MODES
        for constraint in CONSTRAINTS
    ]


def config_from_flags(
    diag: bool = False,
    by_row: bool = False,
    by_col: bool = False,
    by_color: bool = False,
    multicolor: bool = False,
    more_info: bool = True,
) -> ObjectViewConfig:
    """Map the keyword-flag surface used in prompts onto a config.

    Flags are meant to be mutually exclusive; if several are set, by_row
    wins over by_col over by_color over diag.
    """
    if by_row:
        constraint = "row"
    elif by_col:
        constraint = "col"
    elif by_color:
        constraint = "color"
    elif diag:
        constraint = "diag"
    else:
        constraint = "none"
    return ObjectViewConfig("multi" if multicolor else "mono", constraint, more_info)


def _member_groups(grid: CharGrid, cfg: ObjectViewConfig) -> list[list[Coord]]:
    """Member-cell sets per object, in deterministic discovery order."""
    rows, cols = len(grid), len(grid[0])

    if cfg.constraint == "color":
        by_color: dict[str, list[Coord]] = {}
        for r in range(rows):
            for c in range(cols):
                ch = grid[r][c]
                if ch != BACKGROUND:
                    by_color.setdefault(ch, []).append((r, c))
        return list(by_color.values())

    if cfg.constraint in ("row", "col"):
        groups: list[list[Coord]] = []
        lines = (
            [[(r, c) for c in range(cols)] for r in range(rows)]
            if cfg.constraint == "row"
            else [[(r, c) for r in range(rows)] for c in range(cols)]
        )
        for line in lines:
            run: list[Coord] = []
            for r, c in line:
                ch = grid[r][c]
                if ch == BACKGROUND:
                    if run:
                        groups.append(run)
                        run = []
                elif run and cfg.color_mode == "mono" and ch != grid[run[-1][0]][run[-1][1]]:
                    groups.append(run)
                    run = [(r, c)]
                else:
                    run.append((r, c))
            if run:
                groups.append(run)
        return groups

    # none / diag: flood fill over non-background cells
    neighbors = _ORTHO + _DIAGS if cfg.constraint == "diag" else _ORTHO
    seen = [[False] * cols for _ in range(rows)]
    groups = []
    for r in range(rows):
        for c in range(cols):
            if grid[r][c] == BACKGROUND or seen[r][c]:
                continue
            members: list[Coord] = []
            stack = [(r, c)]
            seen[r][c] = True
            while stack:
                cr, cc = stack.pop()
                members.append((cr, cc))
                for dr, dc in neighbors:
                    nr, nc = cr + dr, cc + dc
                    if not (0 <= nr < rows and 0 <= nc < cols):
                        continue
                    if seen[nr][nc] or grid[nr][nc] == BACKGROUND:
                        continue
                    if cfg.color_mode == "mono" and grid[nr][nc] != grid[cr][cc]:
                        continue
                    seen[nr][nc] = True
                    stack.append((nr, nc))
            members.sort()
            groups.append(members)
    return groups


def _holes(grid: CharGrid, members: list[Coord]) -> list[list[Coord]]:
    """Background regions sealed off by this object's member cells.

    Flood 4-connectivity from a one-cell ring around the object's bounding
    box, walking any non-member cell; background cells never reached are
    enclosed. Each enclosed region becomes one hole.
    """
    rows, cols = len(grid), len(grid[0])
    member_set = set(members)
    r0 = min(r for r, _ in members) - 1
    r1 = max(r for r, _ in members) + 1
    c0 = min(c for _, c in members) - 1
    c1 = max(c for _, c in members) + 1
    reached: set[Coord] = set()
    stack = [
        (r, c)
        for r in range(r0, r1 + 1)
        for c in range(c0, c1 + 1)
        if (r in (r0, r1) or c in (c0, c1)) and (r, c) not in member_set
    ]
    reached.update(stack)
    while stack:
        cr, cc = stack.pop()
        for dr, dc in _ORTHO:
            nr, nc = cr + dr, cc + dc
            if not (r0 <= nr <= r1 and c0 <= nc <= c1):
                continue
            if (nr, nc) in reached or (nr, nc) in member_set:
                continue
            reached.add((nr, nc))
            stack.append((nr, nc))

    sealed = {
        (r, c)
        for r in range(max(r0, 0), min(r1, rows - 1) + 1)
        for c in range(max(c0, 0), min(c1, cols - 1) + 1)
        if grid[r][c] == BACKGROUND and (r, c) not in reached and (r, c) not in member_set
    }
    regions: list[list[Coord]] = []
    while sealed:
        seed = min(sealed)
        region = [seed]
        sealed.discard(seed)
        frontier = [seed]
        while frontier:
            cr, cc = frontier.pop()
            for dr, dc in _ORTHO:
                nxt = (cr + dr, cc + dc)
                if nxt in sealed:
                    sealed.discard(nxt)
                    region.append(nxt)
                    frontier.append(nxt)
        region.sort()
        regions.append(region)
    return regions


def _build_object(
    grid: CharGrid, members: list[Coord], more_info: bool, hole: bool = False
) -> ArcObject:
    r0 = min(r for r, _ in members)
    c0 = min(c for _, c in members)
    r1 = max(r for r, _ in members)
    c1 = max(c for _, c in members)
    sub = [[BACKGROUND] * (c1 - c0 + 1) for _ in range(r1 - r0 + 1)]
    for r, c in members:
        sub[r - r0][c - c0] = HOLE if hole else grid[r][c]
    obj: ArcObject = {"tl": (r0, c0), "grid": sub}
    if more_info:
        obj["size"] = (len(sub), len(sub[0]))
        obj["cell_count"] = len(members)
        obj["shape"] = [
            ["x" if cell != BACKGROUND else BACKGROUND for cell in row] for row in sub
        ]
    return obj


def get_objects(
    grid: CharGrid,
    diag: bool = False,
    by_row: bool = False,
    by_col: bool = False,
    by_color: bool = False,
    multicolor: bool = False,
    more_info: bool = True,
) -> list[ArcObject]:
    """Extract objects from a character grid.

    Returns a list of object dicts ordered by bounding-box top-left
    (row, then col). Under the unconstrained and diagonal groupings,
    enclosed background regions are appended as '$' objects.
    """
    cfg = config_from_flags(diag, by_row, by_col, by_color, multicolor, more_info)
    return get_objects_by_config(grid, cfg)


def get_objects_by_config(grid: CharGrid, cfg: ObjectViewConfig) -> list[ArcObject]:
    if not grid or not grid[0]:
        return []
    groups = _member_groups(grid, cfg)
    entries: list[tuple[Coord, int, ArcObject]] = []
    for order, members in enumerate(groups):
        obj = _build_object(grid, members, cfg.more_info)
        entries.append((obj["tl"], order, obj))
    if cfg.constraint in ("none", "diag"):
        emitted: set[frozenset[Coord]] = set()
        order = len(groups)
        for members in groups:
            for region in _holes(grid, members):
                key = frozenset(region)
                if key in emitted:
                    continue
                emitted.add(key)
                obj = _build_object(grid, region, cfg.more_info, hole=True)
                entries.append((obj["tl"], order, obj))
                order += 1
    entries.sort(key=lambda e: (e[0], e[1]))
    return [obj for _, _, obj in entries]


def get_pixel_coords(grid: CharGrid) -> dict[str, list[Coord]]:
    """Coordinates of every non-background color.

    Keys are ordered from most pixels to least; ties keep the color whose
    first cell appears earlier in row-major order. Coordinate lists are
    row-major sorted.
    """
    coords: dict[str, list[Coord]] = {}
    for r, row in enumerate(grid):
        for c, ch in enumerate(row):
            if ch != BACKGROUND:
                coords.setdefault(ch, []).append((r, c))
    first_seen = {ch: i for i, ch in enumerate(coords)}
    ordered = sorted(coords, key=lambda ch: (-len(coords[ch]), first_seen[ch]))
    return {ch: coords[ch] for ch in ordered}
