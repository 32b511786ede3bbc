"""Text abstraction spaces shown to the model, and the context-budget filter.

Three views exist: grid (the full character grid), object (extracted
objects under one of the ten configs) and pixel (color -> coordinate
lists). Serialization is byte-deterministic: single quotes, no spaces.
An expert agent is one view combination; twenty standard agents come from
the ten object-view configs crossed with the pixel-view toggle, with grid
view on unless it alone would bust the token budget.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

from .taskmodel import Grid, Task, grid_to_chars
from .objects import ObjectViewConfig, all_object_view_configs, get_objects_by_config, get_pixel_coords

Tokenizer = Callable[[str], int]

DEFAULT_VIEW_BUDGET = 3000
DEFAULT_REQUEST_CAP = 8000


def _compact(value) -> str:
    """Python-literal style serialization with no whitespace."""
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, str):
        return "'" + value + "'"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, tuple):
        return "(" + ",".join(_compact(v) for v in value) + ")"
    if isinstance(value, list):
        return "[" + ",".join(_compact(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"'{k}':{_compact(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_grid_view(grid: Grid) -> str:
    """The whole grid as a nested char-array literal."""
    return _compact(grid_to_chars(grid))


def render_object_view(grid: Grid, cfg: ObjectViewConfig) -> str:
    """Objects extracted under cfg, serialized in object order."""
    return _compact(get_objects_by_config(grid_to_chars(grid), cfg))


def render_pixel_view(grid: Grid) -> str:
    """Color -> row-major coordinates, most pixels first."""
    return _compact(get_pixel_coords(grid_to_chars(grid)))


def estimate_tokens(text: str, tokenizer: Tokenizer | None = None) -> int:
    """Token estimate; the default heuristic is ceil(len/4)."""
    if tokenizer is not None:
        return tokenizer(text)
    return math.ceil(len(text) / 4)


@dataclass(frozen=True)
class AgentConfig:
    """One expert agent: an object-view variant and the pixel/grid toggles."""

    object_view: ObjectViewConfig | None
    pixel_view: bool
    grid_view: bool

    def __post_init__(self):
        if self.object_view is None and not self.pixel_view:
            raise ValueError("agent needs at least one of object view or pixel view")

    @property
    def agent_id(self) -> str:
        parts = [self.object_view.label if self.object_view else "pixel-only"]
        if self.pixel_view and self.object_view is not None:
            parts.append("px")
        if self.grid_view:
            parts.append("gv")
        return "+".join(parts)


@dataclass(frozen=True)
class PairViews:
    """The rendered views of one grid."""

    size: tuple[int, int]
    grid_view: str | None = None
    object_view: str | None = None
    pixel_view: str | None = None

    def texts(self) -> list[str]:
        return [t for t in (self.grid_view, self.object_view, self.pixel_view) if t is not None]


@dataclass(frozen=True)
class ViewBundle:
    """Views for every train pair and test input under one agent config."""

    config: AgentConfig
    train: tuple[tuple[PairViews, PairViews], ...]
    test_inputs: tuple[PairViews, ...]
    token_estimate: int = field(compare=False, default=0)


def render_pair_views(grid: Grid, config: AgentConfig) -> PairViews:
    return PairViews(
        size=(len(grid), len(grid[0])),
        grid_view=render_grid_view(grid) if config.grid_view else None,
        object_view=(
            render_object_view(grid, config.object_view) if config.object_view else None
        ),
        pixel_view=render_pixel_view(grid) if config.pixel_view else None,
    )


def build_view_bundle(
    task: Task,
    config: AgentConfig,
    tokenizer: Tokenizer | None = None,
    train_inputs: list[Grid] | None = None,
) -> ViewBundle:
    """Render all views for a task under one agent config.

    train_inputs substitutes replacement input grids (the feedback loop
    re-renders views after a program's outputs become the new inputs).
    """
    inputs = train_inputs if train_inputs is not None else [p.input for p in task.train]
    if len(inputs) != len(task.train):
        raise ValueError("need one replacement input per train pair")
    train = tuple(
        (render_pair_views(grid, config), render_pair_views(pair.output, config))
        for grid, pair in zip(inputs, task.train)
    )
    tests = tuple(render_pair_views(pair.input, config) for pair in task.test)
    texts: list[str] = []
    for inp, out in train:
        texts.extend(inp.texts())
        texts.extend(out.texts())
    for t in tests:
        texts.extend(t.texts())
    estimate = estimate_tokens("\n".join(texts), tokenizer)
    return ViewBundle(config=config, train=train, test_inputs=tests, token_estimate=estimate)


def reference_config() -> AgentConfig:
    """Grid view plus the mono-color, no-diagonal object view: the bundle
    whose size decides whether a task is eligible at all."""
    return AgentConfig(object_view=ObjectViewConfig("mono", "none", True), pixel_view=False, grid_view=True)


def standard_agent_configs() -> list[AgentConfig]:
    """The twenty standard agents: ten object views x pixel toggle."""
    return [
        AgentConfig(object_view=ov, pixel_view=px, grid_view=True)
        for ov in all_object_view_configs()
        for px in (False, True)
    ]


def task_is_eligible(
    task: Task, budget_tokens: int = DEFAULT_VIEW_BUDGET, tokenizer: Tokenizer | None = None
) -> bool:
    """A task qualifies when the reference bundle fits the view budget."""
    bundle = build_view_bundle(task, reference_config(), tokenizer)
    return bundle.token_estimate <= budget_tokens


def eligible_agents(
    task: Task, budget_tokens: int = DEFAULT_VIEW_BUDGET, tokenizer: Tokenizer | None = None
) -> list[tuple[AgentConfig, ViewBundle]]:
    """Enumerate agents whose bundles fit the view budget.

    Grid view is dropped per agent when its inclusion alone exceeds the
    budget; an agent still over budget is excluded. When pixel-toggled
    agents lose their object view to the budget, a single pixel-only
    agent is appended so at least one view remains active. An ineligible
    task yields no agents.
    """
    if not task_is_eligible(task, budget_tokens, tokenizer):
        return []
    result: list[tuple[AgentConfig, ViewBundle]] = []
    need_pixel_only = False
    for config in standard_agent_configs():
        bundle = build_view_bundle(task, config, tokenizer)
        if bundle.token_estimate <= budget_tokens:
            result.append((config, bundle))
            continue
        trimmed = AgentConfig(
            object_view=config.object_view, pixel_view=config.pixel_view, grid_view=False
        )
        bundle = build_view_bundle(task, trimmed, tokenizer)
        if bundle.token_estimate <= budget_tokens:
            result.append((trimmed, bundle))
        elif config.pixel_view:
            need_pixel_only = True
    if need_pixel_only:
        for grid_view in (True, False):
            config = AgentConfig(object_view=None, pixel_view=True, grid_view=grid_view)
            bundle = build_view_bundle(task, config, tokenizer)
            if bundle.token_estimate <= budget_tokens:
                result.append((config, bundle))
                break
    return result
