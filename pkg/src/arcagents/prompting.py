"""Prompt assembly and parsing of the model's JSON chain-of-thought reply.

The wording shown to the model lives in templates/*.txt so it can be
audited byte for byte; this module only stitches blocks together. The
system prompt carries the helper-function descriptions and one-shot
asserts filtered to the agent's active views (too much context hurts, so
a pixel-only agent never hears about get_objects), the conditional
functions and the seven-field output schema. The user prompt carries the
coordinate conventions, a JSON document of the abstraction views and the
environmental-feedback block, if any.
"""

import ast
import json
from dataclasses import dataclass, field
from importlib.resources import files

from .taskmodel import Grid, Task
from .views import (
    DEFAULT_REQUEST_CAP,
    AgentConfig,
    PairViews,
    Tokenizer,
    ViewBundle,
    build_view_bundle,
    estimate_tokens,
)


class ResponseUnparseable(ValueError):
    """Model output that cannot be decoded into the seven-field reply."""


class BudgetExceeded(ValueError):
    """A prompt would not fit the request token cap."""


COT_FIELDS = (
    "reflection",
    "pixel_changes",
    "object_changes",
    "helper_functions",
    "overall_pattern",
    "program_instructions",
    "python_program",
)

# Helper functions only mentioned when the matching view is active.
OBJECT_VIEW_FUNCTIONS = frozenset(
    {
        "get_objects",
        "combine_object",
        "get_object_color",
        "change_object_color",
        "fill_object",
        "object_contains_color",
    }
)
PIXEL_VIEW_FUNCTIONS = frozenset({"get_pixel_coords"})

TEMPLATE_NAMES = (
    "system_header",
    "primitives_header",
    "primitives",
    "primitive_asserts",
    "conditionals_header",
    "conditionals",
    "conditional_asserts",
    "output_schema",
    "user_header",
    "get_objects_line",
    "feedback_compile",
    "feedback_output",
)

_cache: dict[str, str] = {}


def load_template(name: str) -> str:
    if name not in _cache:
        _cache[name] = (
            files(__package__).joinpath(f"templates/{name}.txt").read_text(encoding="utf-8")
        )
    return _cache[name]


def all_templates() -> dict[str, str]:
    return {name: load_template(name) for name in TEMPLATE_NAMES}


def _function_blocks(text: str) -> list[tuple[str, str]]:
    """Split a description resource into (function name, block) pairs.

    A block starts at a line beginning with "- name(" and runs until the
    next such line, so multi-line descriptions stay attached.
    """
    blocks: list[tuple[str, str]] = []
    current: list[str] = []
    name = ""
    for line in text.splitlines():
        if line.startswith("- ") and "(" in line:
            if current:
                blocks.append((name, "\n".join(current)))
            name = line[2:].split("(", 1)[0].strip()
            current = [line]
        elif current:
            current.append(line)
    if current:
        blocks.append((name, "\n".join(current)))
    return blocks


def _active_function(name: str, config: AgentConfig) -> bool:
    if name in OBJECT_VIEW_FUNCTIONS:
        return config.object_view is not None
    if name in PIXEL_VIEW_FUNCTIONS:
        return config.pixel_view
    return True


def _filtered_blocks(resource: str, config: AgentConfig, include_all: bool) -> str:
    blocks = _function_blocks(load_template(resource))
    if not include_all:
        blocks = [(n, b) for n, b in blocks if _active_function(n, config)]
    return "\n".join(block for _, block in blocks)


def _filtered_asserts(resource: str, config: AgentConfig, include_all: bool) -> str:
    lines = [l for l in load_template(resource).splitlines() if l.strip()]
    if not include_all:
        kept = []
        for line in lines:
            name = line.removeprefix("assert ").split("(", 1)[0].strip()
            if _active_function(name, config):
                kept.append(line)
        lines = kept
    return "\n".join(lines)


def build_system_prompt(config: AgentConfig, include_all_functions: bool = False) -> str:
    """The full system prompt for one agent."""
    parts = [
        load_template("system_header").rstrip("\n"),
        "",
        load_template("primitives_header").rstrip("\n"),
        _filtered_blocks("primitives", config, include_all_functions),
        "",
        _filtered_asserts("primitive_asserts", config, include_all_functions),
        "",
        load_template("conditionals_header").rstrip("\n"),
        _filtered_blocks("conditionals", config, include_all_functions),
        "",
        _filtered_asserts("conditional_asserts", config, include_all_functions),
        "",
        load_template("output_schema").rstrip("\n"),
    ]
    return "\n".join(parts)


@dataclass(frozen=True)
class FeedbackState:
    """What the previous iteration, if any, feeds into the next prompt."""

    kind: str = "none"  # none | compile_error | output_error
    prev_code: str = ""
    error_message: str = ""
    prev_overall_pattern: str = ""
    produced_outputs: tuple = ()

    def __post_init__(self):
        if self.kind not in ("none", "compile_error", "output_error"):
            raise ValueError(f"unknown feedback kind {self.kind!r}")
        if self.kind == "compile_error" and not (self.prev_code and self.error_message):
            raise ValueError("compile feedback needs prev_code and error_message")
        if self.kind == "output_error" and not self.produced_outputs:
            raise ValueError("output feedback needs the produced grids")


NO_FEEDBACK = FeedbackState()


def compile_feedback(prev_code: str, error_message: str, prev_overall_pattern: str) -> FeedbackState:
    return FeedbackState(
        kind="compile_error",
        prev_code=prev_code,
        error_message=error_message,
        prev_overall_pattern=prev_overall_pattern or "(none)",
    )


def output_feedback(produced_outputs: list[Grid]) -> FeedbackState:
    return FeedbackState(kind="output_error", produced_outputs=tuple(
        tuple(tuple(row) for row in grid) for grid in produced_outputs
    ))


def _views_entry(pair: PairViews) -> dict:
    entry: dict = {}
    if pair.grid_view is not None:
        entry["grid_view"] = pair.grid_view
    if pair.object_view is not None:
        entry["object_view"] = pair.object_view
    if pair.pixel_view is not None:
        entry["pixel_view"] = pair.pixel_view
    entry["size"] = [pair.size[0], pair.size[1]]
    return entry


def render_views_document(bundle: ViewBundle) -> str:
    """The user-prompt JSON body: train pair views plus the test input."""
    doc: dict = {
        "train": [
            {"input": _views_entry(inp), "output": _views_entry(out)}
            for inp, out in bundle.train
        ]
    }
    tests = [_views_entry(t) for t in bundle.test_inputs]
    doc["test_input"] = tests[0] if len(tests) == 1 else tests
    return json.dumps(doc, separators=(",", ":"))


def build_user_prompt(
    task: Task,
    bundle: ViewBundle,
    feedback: FeedbackState = NO_FEEDBACK,
    tokenizer: Tokenizer | None = None,
) -> str:
    """Header, views JSON and the feedback block for one iteration.

    After an output error the produced grids become the new train inputs
    and the views document is recomputed over them.
    """
    config = bundle.config
    parts = [load_template("user_header").rstrip("\n")]
    if config.object_view is not None:
        ov = config.object_view
        parts.append(
            load_template("get_objects_line")
            .rstrip("\n")
            .format(
                diag=ov.constraint == "diag",
                by_row=ov.constraint == "row",
                by_col=ov.constraint == "col",
                by_color=ov.constraint == "color",
                multicolor=ov.color_mode == "multi",
                more_info=ov.more_info,
            )
        )
    if feedback.kind == "output_error":
        replaced = [[list(row) for row in grid] for grid in feedback.produced_outputs]
        bundle = build_view_bundle(task, config, tokenizer, train_inputs=replaced)
    parts.append(render_views_document(bundle))
    if feedback.kind == "compile_error":
        parts.append(
            load_template("feedback_compile")
            .rstrip("\n")
            .format(
                previous_code=feedback.prev_code,
                error_message=feedback.error_message,
                previous_overall_pattern=feedback.prev_overall_pattern,
            )
        )
    elif feedback.kind == "output_error":
        parts.append(load_template("feedback_output").rstrip("\n"))
    return "\n".join(parts)


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    token_estimate: int

    def messages(self) -> list[dict]:
        return [
            {"role": "system", "content": self.system_text},
            {"role": "user", "content": self.user_text},
        ]


def build_prompt_bundle(
    task: Task,
    bundle: ViewBundle,
    feedback: FeedbackState = NO_FEEDBACK,
    request_cap_tokens: int = DEFAULT_REQUEST_CAP,
    tokenizer: Tokenizer | None = None,
    include_all_functions: bool = False,
) -> PromptBundle:
    system_text = build_system_prompt(bundle.config, include_all_functions)
    user_text = build_user_prompt(task, bundle, feedback, tokenizer)
    estimate = estimate_tokens(system_text, tokenizer) + estimate_tokens(user_text, tokenizer)
    if estimate > request_cap_tokens:
        raise BudgetExceeded(
            f"prompt estimate {estimate} exceeds the request cap {request_cap_tokens}"
        )
    return PromptBundle(system_text=system_text, user_text=user_text, token_estimate=estimate)


@dataclass(frozen=True)
class CotResponse:
    """The parsed seven-field reply."""

    reflection: str
    pixel_changes: str
    object_changes: str
    helper_functions: str
    overall_pattern: str
    program_instructions: str
    program_text: str

    def to_wire(self) -> dict:
        return {
            "reflection": self.reflection,
            "pixel_changes": self.pixel_changes,
            "object_changes": self.object_changes,
            "helper_functions": self.helper_functions,
            "overall_pattern": self.overall_pattern,
            "program_instructions": self.program_instructions,
            "python_program": self.program_text,
        }


def _strip_code_fences(raw: str) -> str:
    if "```" not in raw:
        return raw
    first = raw.find("```")
    rest = raw[first + 3 :]
    newline = rest.find("\n")
    if newline != -1 and rest[:newline].strip().isalpha():
        rest = rest[newline + 1 :]
    closing = rest.rfind("```")
    if closing != -1:
        rest = rest[:closing]
    return rest


def _balanced_object_span(text: str) -> str | None:
    start = text.find("{")
    if start == -1:
        return None
    depth = 0
    quote = None
    i = start
    while i < len(text):
        ch = text[i]
        if quote is not None:
            if ch == "\\":
                i += 2
                continue
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
        i += 1
    return None


def parse_cot_response(raw: str) -> CotResponse:
    """Locate and decode the JSON object in a raw model reply.

    Tolerates surrounding prose, code fences and single-quoted pseudo-JSON.
    """
    if not isinstance(raw, str) or "{" not in raw:
        raise ResponseUnparseable("no JSON object found in response")
    body = _strip_code_fences(raw)
    spans = []
    balanced = _balanced_object_span(body)
    if balanced:
        spans.append(balanced)
    first, last = body.find("{"), body.rfind("}")
    if first != -1 and last > first:
        spans.append(body[first : last + 1])
    doc = None
    for span in spans:
        for decoder in (json.loads, ast.literal_eval):
            try:
                candidate = decoder(span)
            except (ValueError, SyntaxError):
                continue
            if isinstance(candidate, dict):
                doc = candidate
                break
        if doc is not None:
            break
    if doc is None:
        raise ResponseUnparseable("response JSON could not be decoded")
    values = []
    for key in COT_FIELDS:
        if key not in doc:
            raise ResponseUnparseable(f"response is missing the {key!r} field")
        value = doc[key]
        if not isinstance(value, str) or not value.strip():
            raise ResponseUnparseable(f"field {key!r} must be non-empty text")
        values.append(value)
    return CotResponse(*values)
