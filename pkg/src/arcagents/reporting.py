"""Aggregate task results into the run-level reporting categories.

Totals split into solved / not solved / partially solved (plus
ineligible and ungraded); solves reached through the feedback loop are
attributed to the incorrect-output or compile-error path; solved tasks
are bucketed by the view combination of the winning agent. Whether an
unsolved task's description was nevertheless right needs a human
judgment, so the report surfaces the candidate pattern texts and accepts
a label file mapping task_id to {"description_correct": bool}.
"""

import html as _html
import json
from dataclasses import dataclass, field

from .orchestrator import TaskResult

STATUSES = ("solved", "partial", "unsolved", "ineligible", "ungraded")
ATTRIBUTION_BUCKETS = ("object_only", "pixel_only", "object_and_pixel", "grid_only")

OBJECT_FUNCTIONS = (
    "get_objects",
    "combine_object",
    "get_object_color",
    "change_object_color",
    "fill_object",
    "object_contains_color",
)
PIXEL_FUNCTIONS = ("get_pixel_coords",)


class UnknownFormat(ValueError):
    pass


def _agent_flags(agent_id: str) -> tuple[bool, bool, bool]:
    """(object view, pixel view, grid view) from a stable agent id."""
    parts = agent_id.split("+")
    has_object = parts[0] != "pixel-only"
    has_pixel = "px" in parts[1:] or parts[0] == "pixel-only"
    has_grid = "gv" in parts[1:]
    return has_object, has_pixel, has_grid


def attribute_view(winning: dict) -> tuple[str, bool]:
    """Bucket a winning candidate; flagged when no view function was used
    and the solve is credited to the grid view alone."""
    texts = " ".join(winning.get("texts", []))
    uses_object = any(name + "(" in texts for name in OBJECT_FUNCTIONS)
    uses_pixel = any(name + "(" in texts for name in PIXEL_FUNCTIONS)
    if not uses_object and not uses_pixel:
        return "grid_only", True
    has_object, has_pixel, _ = _agent_flags(winning["agent_id"])
    if has_object and has_pixel:
        return "object_and_pixel", False
    if has_object:
        return "object_only", False
    return "pixel_only", False


@dataclass
class RunSummary:
    totals: dict = field(default_factory=dict)
    feedback_assisted: dict = field(default_factory=dict)
    view_attribution: dict = field(default_factory=dict)
    flagged_grid_only: list = field(default_factory=list)
    correct_description: int | None = None
    rows: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "totals": self.totals,
            "feedback_assisted": self.feedback_assisted,
            "view_attribution": self.view_attribution,
            "flagged_grid_only": self.flagged_grid_only,
            "correct_description": self.correct_description,
            "rows": self.rows,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunSummary":
        return cls(
            totals=doc["totals"],
            feedback_assisted=doc["feedback_assisted"],
            view_attribution=doc["view_attribution"],
            flagged_grid_only=doc["flagged_grid_only"],
            correct_description=doc["correct_description"],
            rows=doc["rows"],
        )


def summarize_run(
    results: list[TaskResult | dict], labels: dict | None = None
) -> RunSummary:
    """Fold task results into category counts; order-insensitive."""
    totals = {status: 0 for status in STATUSES}
    feedback = {"after_output_error": 0, "after_compile_error": 0}
    attribution = {bucket: 0 for bucket in ATTRIBUTION_BUCKETS}
    flagged: list[str] = []
    rows: list[dict] = []
    labeled_correct = 0
    have_labels = labels is not None

    docs = [r.to_dict() if isinstance(r, TaskResult) else r for r in results]
    for doc in sorted(docs, key=lambda d: d["task_id"]):
        status = doc["status"]
        if status not in totals:
            raise ValueError(f"unknown task status {status!r}")
        totals[status] += 1
        row = {
            "task_id": doc["task_id"],
            "status": status,
            "candidate_pool_size": doc.get("candidate_pool_size", 0),
            "solved_via_feedback": doc.get("solved_via_feedback", "no"),
            "winning_agent": None,
            "attribution": None,
            "patterns": doc.get("patterns", []),
        }
        if status == "solved":
            via = doc.get("solved_via_feedback", "no")
            if via in feedback:
                feedback[via] += 1
            winning = doc.get("winning") or []
            if winning:
                bucket, was_flagged = attribute_view(winning[0])
                attribution[bucket] += 1
                row["winning_agent"] = winning[0]["agent_id"]
                row["attribution"] = bucket
                if was_flagged:
                    flagged.append(doc["task_id"])
        elif have_labels and status in ("unsolved", "partial", "ungraded"):
            label = labels.get(doc["task_id"], {})
            if label.get("description_correct"):
                labeled_correct += 1
        rows.append(row)

    return RunSummary(
        totals=totals,
        feedback_assisted=feedback,
        view_attribution=attribution,
        flagged_grid_only=flagged,
        correct_description=labeled_correct if have_labels else None,
        rows=rows,
    )


def _totals_table(summary: RunSummary) -> list[tuple[str, int]]:
    cells = [("total", sum(summary.totals.values()))]
    cells.extend((status, summary.totals[status]) for status in STATUSES)
    return cells


def render_markdown(summary: RunSummary) -> str:
    lines = ["# Run summary", ""]
    lines.append("| " + " | ".join(k for k, _ in _totals_table(summary)) + " |")
    lines.append("|" + "---|" * len(_totals_table(summary)))
    lines.append("| " + " | ".join(str(v) for _, v in _totals_table(summary)) + " |")
    lines.append("")
    lines.append("Feedback-assisted solves: "
                 f"incorrect output {summary.feedback_assisted['after_output_error']}, "
                 f"compile error {summary.feedback_assisted['after_compile_error']}.")
    lines.append("")
    lines.append("| view | tasks solved |")
    lines.append("|---|---|")
    for bucket in ATTRIBUTION_BUCKETS:
        lines.append(f"| {bucket} | {summary.view_attribution[bucket]} |")
    if summary.correct_description is not None:
        lines.append("")
        lines.append(f"Unsolved tasks with a correct description: {summary.correct_description}.")
    lines.append("")
    lines.append("| task | status | pool | via | agent | attribution |")
    lines.append("|---|---|---|---|---|---|")
    for row in summary.rows:
        lines.append(
            "| {task_id} | {status} | {candidate_pool_size} | {solved_via_feedback} "
            "| {winning_agent} | {attribution} |".format(
                **{k: (v if v is not None else "-") for k, v in row.items()}
            )
        )
    return "\n".join(lines) + "\n"


def render_html(summary: RunSummary) -> str:
    rows = []
    for row in summary.rows:
        cells = "".join(
            f"<td>{_html.escape(str(row[k])) if row[k] is not None else '-'}</td>"
            for k in (
                "task_id",
                "status",
                "candidate_pool_size",
                "solved_via_feedback",
                "winning_agent",
                "attribution",
            )
        )
        rows.append(f"<tr>{cells}</tr>")
    totals = "".join(
        f"<tr><td>{status}</td><td>{count}</td></tr>" for status, count in _totals_table(summary)
    )
    attribution = "".join(
        f"<tr><td>{bucket}</td><td>{summary.view_attribution[bucket]}</td></tr>"
        for bucket in ATTRIBUTION_BUCKETS
    )
    return (
        "<html><body>"
        "<h1>Run summary</h1>"
        f"<table>{totals}</table>"
        "<h2>Tasks solved by view</h2>"
        f"<table>{attribution}</table>"
        "<h2>Tasks</h2>"
        "<table><tr><th>task</th><th>status</th><th>pool</th><th>via</th>"
        "<th>agent</th><th>attribution</th></tr>"
        + "".join(rows)
        + "</table></body></html>"
    )


def render_report(summary: RunSummary, fmt: str) -> bytes:
    if fmt == "json":
        return (
            json.dumps(summary.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n"
        ).encode("utf-8")
    if fmt == "md":
        return render_markdown(summary).encode("utf-8")
    if fmt == "html":
        return render_html(summary).encode("utf-8")
    raise UnknownFormat(f"unknown report format {fmt!r} (expected json, md or html)")
