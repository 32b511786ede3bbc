"""Object extraction against an independent flood-fill labeler."""

import random

from arcagents.gridops import fill_object, get_size
from arcagents.objects import (
    ObjectViewConfig,
    all_object_view_configs,
    config_from_flags,
    get_objects,
    get_objects_by_config,
    get_pixel_coords,
)

SAMPLE_GRID = [[".", ".", "f"], [".", "d", "f"], ["c", "d", "f"]]


def random_grid(rng, max_side=10, chars=".....abcd"):
    rows = rng.randint(1, max_side)
    cols = rng.randint(1, max_side)
    return [[rng.choice(chars) for _ in range(cols)] for _ in range(rows)]


def flood_fill_labels(grid, same_color=True, diagonal=False):
    """Brute-force connected-component labeler (BFS, independent of the
    library's scan order). Returns a list of frozensets of member coords."""
    rows, cols = len(grid), len(grid[0])
    nbrs = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    if diagonal:
        nbrs += [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    unvisited = {(r, c) for r in range(rows) for c in range(cols) if grid[r][c] != "."}
    comps = []
    while unvisited:
        seed = next(iter(unvisited))
        comp = {seed}
        queue = [seed]
        unvisited.discard(seed)
        while queue:
            r, c = queue.pop(0)
            for dr, dc in nbrs:
                pos = (r + dr, c + dc)
                if pos not in unvisited:
                    continue
                if same_color and grid[pos[0]][pos[1]] != grid[r][c]:
                    continue
                unvisited.discard(pos)
                comp.add(pos)
                queue.append(pos)
        comps.append(frozenset(comp))
    return comps


def member_cells(obj):
    tl = obj["tl"]
    return frozenset(
        (tl[0] + r, tl[1] + c)
        for r, row in enumerate(obj["grid"])
        for c, cell in enumerate(row)
        if cell != "."
    )


def real_objects(objs):
    return [o for o in objs if not any("$" in row for row in o["grid"])]


def test_ring_with_hole_assert():
    assert get_objects([["a", "a", "a"], ["a", ".", "a"], ["a", "a", "a"]], more_info=False) == [
        {"tl": (0, 0), "grid": [["a", "a", "a"], ["a", ".", "a"], ["a", "a", "a"]]},
        {"tl": (1, 1), "grid": [["$"]]},
    ]


def test_sample_grid_mono_more_info():
    objs = get_objects(SAMPLE_GRID, more_info=True)
    assert [o["tl"] for o in objs] == [(0, 2), (1, 1), (2, 0)]
    assert [o["size"] for o in objs] == [(3, 1), (2, 1), (1, 1)]
    assert [o["cell_count"] for o in objs] == [3, 2, 1]
    assert objs[0]["shape"] == [["x"], ["x"], ["x"]]
    assert objs[1]["grid"] == [["d"], ["d"]]
    assert objs[2]["grid"] == [["c"]]


def test_more_info_false_omits_fields():
    for obj in get_objects(SAMPLE_GRID, more_info=False):
        assert set(obj) == {"tl", "grid"}


def test_all_background_grid_yields_no_objects():
    assert get_objects([[".", "."], [".", "."]]) == []


def test_multicolor_merges_touching_colors():
    grid = [["a", "b"], [".", "."]]
    assert len(get_objects(grid, multicolor=False, more_info=False)) == 2
    merged = get_objects(grid, multicolor=True, more_info=False)
    assert len(merged) == 1
    assert merged[0]["grid"] == [["a", "b"]]


def test_diag_connects_diagonals():
    grid = [["a", "."], [".", "a"]]
    assert len(get_objects(grid, more_info=False)) == 2
    assert len(get_objects(grid, diag=True, more_info=False)) == 1


def test_by_row_runs():
    grid = [["a", "a", ".", "b"], [".", ".", ".", "."]]
    objs = get_objects(grid, by_row=True, more_info=False)
    assert [o["tl"] for o in objs] == [(0, 0), (0, 3)]
    assert objs[0]["grid"] == [["a", "a"]]
    # mono splits a color change inside a run; multi keeps it together
    grid2 = [["a", "b", "b"]]
    assert len(get_objects(grid2, by_row=True, more_info=False)) == 2
    assert len(get_objects(grid2, by_row=True, multicolor=True, more_info=False)) == 1


def test_by_col_runs():
    grid = [["a", "."], ["a", "."], [".", "b"]]
    objs = get_objects(grid, by_col=True, more_info=False)
    assert [o["tl"] for o in objs] == [(0, 0), (2, 1)]
    assert objs[0]["grid"] == [["a"], ["a"]]


def test_by_color_groups_globally():
    grid = [["a", ".", "a"], [".", "b", "."]]
    objs = get_objects(grid, by_color=True, more_info=False)
    assert len(objs) == 2
    assert objs[0]["grid"] == [["a", ".", "a"]]
    assert objs[1]["grid"] == [["b"]]


def test_holes_only_for_none_and_diag():
    ring = [["a", "a", "a"], ["a", ".", "a"], ["a", "a", "a"]]
    for kwargs in ({"by_row": True}, {"by_col": True}, {"by_color": True}):
        objs = get_objects(ring, more_info=False, **kwargs)
        assert not any("$" in row for o in objs for row in o["grid"])
    assert any(
        "$" in row for o in get_objects(ring, diag=True, more_info=False) for row in o["grid"]
    )


def test_open_shape_has_no_hole():
    grid = [["a", ".", "a"], ["a", "a", "a"]]
    objs = get_objects(grid, more_info=False)
    assert len(objs) == 1


def test_two_holes_in_one_object():
    fig8 = [
        ["a", "a", "a", "a", "a"],
        ["a", ".", "a", ".", "a"],
        ["a", "a", "a", "a", "a"],
    ]
    objs = get_objects(fig8, more_info=False)
    assert [o["tl"] for o in objs] == [(0, 0), (1, 1), (1, 3)]
    assert objs[1]["grid"] == [["$"]] and objs[2]["grid"] == [["$"]]


def test_nested_rings_emit_each_hole_once():
    n = 7
    grid = [["." for _ in range(n)] for _ in range(n)]
    for i in range(n):
        grid[0][i] = grid[n - 1][i] = grid[i][0] = grid[i][n - 1] = "a"
    for i in range(2, 5):
        grid[2][i] = grid[4][i] = grid[i][2] = grid[i][4] = "b"
    objs = get_objects(grid, more_info=False)
    # outer ring, gap ring hole, inner ring, center hole; no duplicates
    assert [o["tl"] for o in objs] == [(0, 0), (1, 1), (2, 2), (3, 3)]
    cell_counts = [
        sum(1 for row in o["grid"] for c in row if c != ".") for o in objs
    ]
    assert cell_counts == [24, 16, 8, 1]
    assert all(c == "$" for row in objs[1]["grid"] for c in row if c != ".")
    assert objs[3]["grid"] == [["$"]]


def test_jointly_enclosed_region_is_not_a_hole():
    # two colors close a ring together; neither alone seals the center
    grid = [
        ["a", "a", "a"],
        ["b", ".", "a"],
        ["b", "b", "a"],
    ]
    objs = get_objects(grid, more_info=False)
    assert not any("$" in row for o in objs for row in o["grid"])
    # as one multicolor object the center is enclosed
    multi = get_objects(grid, multicolor=True, more_info=False)
    assert any("$" in row for o in multi for row in o["grid"])


def test_mono_oracle_equivalence_small():
    rng = random.Random(101)
    for _ in range(300):
        grid = random_grid(rng)
        got = {member_cells(o) for o in real_objects(get_objects(grid, more_info=False))}
        expected = set(flood_fill_labels(grid, same_color=True))
        assert got == expected


def test_multi_and_diag_oracle_equivalence():
    rng = random.Random(103)
    for _ in range(200):
        grid = random_grid(rng)
        got = {
            member_cells(o)
            for o in real_objects(get_objects(grid, multicolor=True, more_info=False))
        }
        assert got == set(flood_fill_labels(grid, same_color=False))
        got_diag = {
            member_cells(o)
            for o in real_objects(get_objects(grid, diag=True, more_info=False))
        }
        assert got_diag == set(flood_fill_labels(grid, same_color=True, diagonal=True))


def test_objects_partition_non_background_cells():
    rng = random.Random(107)
    for _ in range(200):
        grid = random_grid(rng)
        objs = real_objects(get_objects(grid, more_info=False))
        sets = [member_cells(o) for o in objs]
        non_bg = {
            (r, c)
            for r in range(len(grid))
            for c in range(len(grid[0]))
            if grid[r][c] != "."
        }
        assert set().union(*sets) == non_bg if sets else non_bg == set()
        assert sum(len(s) for s in sets) == len(non_bg)


def test_fill_object_repaints_members():
    rng = random.Random(109)
    for _ in range(100):
        grid = random_grid(rng, 8)
        rows, cols = get_size(grid)
        blank = [["."] * cols for _ in range(rows)]
        for obj in real_objects(get_objects(grid, more_info=False)):
            painted = fill_object(blank, obj)
            repainted = {
                (r, c)
                for r in range(rows)
                for c in range(cols)
                if painted[r][c] != "."
            }
            assert repainted == member_cells(obj)


def test_objects_sorted_by_top_left():
    rng = random.Random(113)
    for _ in range(100):
        grid = random_grid(rng)
        for kwargs in ({}, {"diag": True}, {"by_color": True}, {"multicolor": True}):
            tls = [o["tl"] for o in get_objects(grid, more_info=False, **kwargs)]
            assert tls == sorted(tls)


def test_get_pixel_coords_assert_and_order():
    assert get_pixel_coords([["a", "a"], ["d", "f"]]) == {
        "a": [(0, 0), (0, 1)],
        "d": [(1, 0)],
        "f": [(1, 1)],
    }
    # ties broken by first row-major occurrence: d appears before f
    assert list(get_pixel_coords([["a", "a"], ["d", "f"]])) == ["a", "d", "f"]
    assert get_pixel_coords([[".", "."]]) == {}
    assert get_pixel_coords(SAMPLE_GRID) == {
        "f": [(0, 2), (1, 2), (2, 2)],
        "d": [(1, 1), (2, 1)],
        "c": [(2, 0)],
    }
    assert list(get_pixel_coords(SAMPLE_GRID)) == ["f", "d", "c"]


def test_pixel_coords_against_counting_pass():
    rng = random.Random(127)
    for _ in range(300):
        grid = random_grid(rng)
        counts = {}
        for r, row in enumerate(grid):
            for c, ch in enumerate(row):
                if ch != ".":
                    counts.setdefault(ch, []).append((r, c))
        result = get_pixel_coords(grid)
        assert {k: v for k, v in result.items()} == counts
        lengths = [len(v) for v in result.values()]
        assert lengths == sorted(lengths, reverse=True)
        for coords in result.values():
            assert coords == sorted(coords)


def test_config_enumeration():
    configs = all_object_view_configs()
    assert len(configs) == 10
    assert len(set(configs)) == 10
    assert configs[0] == ObjectViewConfig("mono", "none", True)


def test_config_from_flags_precedence():
    assert config_from_flags(by_row=True, by_color=True).constraint == "row"
    assert config_from_flags(diag=True, multicolor=True) == ObjectViewConfig(
        "multi", "diag", True
    )


def test_by_config_matches_flag_surface():
    grid = [["a", "b"], ["b", "."]]
    cfg = ObjectViewConfig("multi", "none", False)
    assert get_objects_by_config(grid, cfg) == get_objects(
        grid, multicolor=True, more_info=False
    )
