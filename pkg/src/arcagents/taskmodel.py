"""Task loading and the numeric/character grid encodings.

Tasks use the public ARC JSON layout: ``{"train": [...], "test": [...]}``
where each element holds an ``input`` grid and (usually) an ``output`` grid
of integers 0-9. Internally grids stay numeric; the character encoding
(0 -> '.', 1..9 -> 'a'..'i') is applied at the point where grids are shown
to a model or executed against a transform program.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

Grid = list[list[int]]
CharGrid = list[list[str]]

MAX_SIDE = 30
BACKGROUND = "."
COLOR_CHARS = ".abcdefghi"
HOLE = "$"

_CHAR_TO_VALUE = {ch: i for i, ch in enumerate(COLOR_CHARS)}


class MalformedTask(ValueError):
    """Task JSON that violates the ARC grid rules."""


class UnknownSymbol(ValueError):
    """Character outside the '.','a'..'i' alphabet."""


def value_to_char(value: int) -> str:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 9:
        raise MalformedTask(f"cell value {value!r} outside 0..9")
    return COLOR_CHARS[value]


def char_to_value(ch: str) -> int:
    if ch not in _CHAR_TO_VALUE:
        raise UnknownSymbol(f"unknown grid symbol {ch!r}")
    return _CHAR_TO_VALUE[ch]


def validate_grid(rows: object, what: str = "grid") -> Grid:
    """Check shape and palette, returning a fresh list-of-lists copy."""
    if not isinstance(rows, list) or not rows:
        raise MalformedTask(f"{what} must be a non-empty list of rows")
    if not 1 <= len(rows) <= MAX_SIDE:
        raise MalformedTask(f"{what} has {len(rows)} rows, allowed 1..{MAX_SIDE}")
    if not isinstance(rows[0], list) or not rows[0]:
        raise MalformedTask(f"{what} rows must be non-empty lists")
    width = len(rows[0])
    if not 1 <= width <= MAX_SIDE:
        raise MalformedTask(f"{what} has {width} cols, allowed 1..{MAX_SIDE}")
    out: Grid = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise MalformedTask(f"{what} row {r} is ragged (expected {width} cells)")
        for c, cell in enumerate(row):
            if not isinstance(cell, int) or isinstance(cell, bool) or not 0 <= cell <= 9:
                raise MalformedTask(f"{what} cell ({r},{c}) value {cell!r} outside 0..9")
        out.append(list(row))
    return out


def grid_to_chars(grid: Grid) -> CharGrid:
    """Elementwise numeric-to-character encoding."""
    return [[value_to_char(v) for v in row] for row in grid]


def chars_to_grid(chars: CharGrid) -> Grid:
    """Inverse of grid_to_chars; rejects anything outside '.','a'..'i'."""
    return [[char_to_value(ch) for ch in row] for row in chars]


@dataclass(frozen=True)
class TrainPair:
    input: Grid
    output: Grid


@dataclass(frozen=True)
class TestPair:
    __test__ = False  # keep pytest from collecting this as a test class

    input: Grid
    output: Grid | None = None

    @property
    def output_hidden(self) -> bool:
        return self.output is None


@dataclass(frozen=True)
class Task:
    task_id: str
    train: tuple[TrainPair, ...] = field(default_factory=tuple)
    test: tuple[TestPair, ...] = field(default_factory=tuple)


def load_task(data: bytes | str, task_id: str = "") -> Task:
    """Parse one ARC task file.

    Raises MalformedTask for bad JSON, ragged rows, out-of-range values or
    out-of-range grid sizes. Test pairs may omit "output" (hidden grading).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedTask(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedTask("task document must be a JSON object")
    for key in ("train", "test"):
        if key not in doc or not isinstance(doc[key], list) or not doc[key]:
            raise MalformedTask(f"task needs a non-empty {key!r} array")

    train: list[TrainPair] = []
    for i, pair in enumerate(doc["train"]):
        if not isinstance(pair, dict) or "input" not in pair or "output" not in pair:
            raise MalformedTask(f"train[{i}] needs input and output grids")
        train.append(
            TrainPair(
                input=validate_grid(pair["input"], f"train[{i}].input"),
                output=validate_grid(pair["output"], f"train[{i}].output"),
            )
        )

    test: list[TestPair] = []
    for i, pair in enumerate(doc["test"]):
        if not isinstance(pair, dict) or "input" not in pair:
            raise MalformedTask(f"test[{i}] needs an input grid")
        out = pair.get("output")
        test.append(
            TestPair(
                input=validate_grid(pair["input"], f"test[{i}].input"),
                output=None if out is None else validate_grid(out, f"test[{i}].output"),
            )
        )
    return Task(task_id=task_id, train=tuple(train), test=tuple(test))


def load_task_file(path: str | Path) -> Task:
    path = Path(path)
    return load_task(path.read_bytes(), task_id=path.stem)


def load_task_dir(path: str | Path) -> list[Task]:
    """Load every *.json task in a directory, sorted by task id."""
    return [load_task_file(p) for p in sorted(Path(path).glob("*.json"))]
