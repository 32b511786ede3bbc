"""Command-line front end: solve tasks, inspect views and prompts, execute
programs in the sandbox and render run reports."""

import argparse
import json
import os
import sys
from pathlib import Path

from . import reporting
from .gateway import Cassette, ChatParams, Gateway, LiveBackend, RateLimiter, ReplayBackend, ScriptedBackend
from .orchestrator import RunConfig, run_task
from .prompting import all_templates, build_system_prompt
from .taskmodel import Task, chars_to_grid, grid_to_chars, load_task_file
from .translang import ExecError, run_program
from .views import (
    DEFAULT_REQUEST_CAP,
    DEFAULT_VIEW_BUDGET,
    eligible_agents,
    standard_agent_configs,
)

ENV_API_KEY = "ARCAGENTS_API_KEY"
ENV_BASE_URL = "ARCAGENTS_BASE_URL"
ENV_MODEL = "ARCAGENTS_MODEL"


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", choices=("scripted", "replay", "live"), default="scripted")
    parser.add_argument("--scripted-responses", type=Path, help="JSON list of response texts")
    parser.add_argument("--cassette", type=Path, help="cassette file for record/replay")
    parser.add_argument("--record", action="store_true", help="append responses to the cassette")
    parser.add_argument("--run-dir", type=Path, help="directory for attempts.jsonl and result.json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=3)
    parser.add_argument("--iterations", type=int, default=3)
    parser.add_argument("--budget", type=int, default=DEFAULT_VIEW_BUDGET)
    parser.add_argument("--request-cap", type=int, default=DEFAULT_REQUEST_CAP)
    parser.add_argument("--agents", help="comma-separated agent ids to run")
    parser.add_argument("--model", default=os.environ.get(ENV_MODEL, "gpt-4"))
    parser.add_argument("--temperature", type=float, default=0.7)
    parser.add_argument("--max-workers", type=int, default=1)
    parser.add_argument("--early-stop", action="store_true")
    parser.add_argument(
        "--all-functions",
        action="store_true",
        help="describe every helper in the system prompt instead of filtering by view",
    )


def _build_gateway(args) -> Gateway:
    params = ChatParams(
        model_id=args.model,
        temperature=args.temperature,
        request_cap_tokens=args.request_cap,
    )
    record_to = None
    if args.backend == "scripted":
        responses = []
        if args.scripted_responses:
            responses = json.loads(args.scripted_responses.read_text(encoding="utf-8"))
        backend = ScriptedBackend(responses)
        limiter = None
    elif args.backend == "replay":
        if not args.cassette:
            raise SystemExit("--backend replay needs --cassette")
        backend = ReplayBackend(Cassette(args.cassette))
        limiter = None
    else:
        api_key = os.environ.get(ENV_API_KEY)
        base_url = os.environ.get(ENV_BASE_URL)
        if not api_key or not base_url:
            raise SystemExit(f"live backend needs {ENV_API_KEY} and {ENV_BASE_URL} set")
        backend = LiveBackend(base_url, api_key)
        limiter = RateLimiter(rate_per_sec=1.0, max_in_flight=2)
    if args.record:
        cassette_path = args.cassette
        if cassette_path is None and args.run_dir is not None:
            cassette_path = args.run_dir / "cassettes" / "run.jsonl"
        if cassette_path is None:
            raise SystemExit("--record needs --cassette or --run-dir")
        record_to = Cassette(cassette_path)
    return Gateway(backend=backend, params=params, record_to=record_to, limiter=limiter)


def _run_config(args) -> RunConfig:
    return RunConfig(
        samples_per_agent=args.samples,
        max_iterations=args.iterations,
        view_budget_tokens=args.budget,
        seed=args.seed,
        agents=tuple(args.agents.split(",")) if args.agents else None,
        max_workers=args.max_workers,
        early_stop=args.early_stop,
        include_all_functions=args.all_functions,
    )


def _load_grid_file(path: Path):
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, list) or not data or not isinstance(data[0], list):
        raise SystemExit("grid file must hold a JSON 2D array")
    numeric = isinstance(data[0][0], int)
    chars = grid_to_chars(data) if numeric else data
    return chars, numeric


def cmd_solve(args) -> int:
    task = load_task_file(args.task)
    gateway = _build_gateway(args)
    result = run_task(task, gateway, _run_config(args), run_dir=args.run_dir)
    print(json.dumps(result.to_dict(), ensure_ascii=False, sort_keys=True, indent=2))
    return 0


def cmd_batch(args) -> int:
    task_files = sorted(Path(args.dir).glob("*.json"))
    if not task_files:
        raise SystemExit(f"no *.json tasks under {args.dir}")
    gateway = _build_gateway(args)
    config = _run_config(args)
    results = []
    for path in task_files:
        task = load_task_file(path)
        run_dir = args.run_dir / task.task_id if args.run_dir else None
        result = run_task(task, gateway, config, run_dir=run_dir)
        results.append(result)
        print(f"{task.task_id}: {result.status}")
    eligible = sum(1 for r in results if r.status != "ineligible")
    solved = sum(1 for r in results if r.status == "solved")
    print(f"eligible {eligible}/{len(results)}, solved {solved}")
    if args.run_dir:
        summary = reporting.summarize_run(results)
        (args.run_dir / "summary.json").write_bytes(reporting.render_report(summary, "json"))
    return 0


def cmd_report(args) -> int:
    run_dir = Path(args.run)
    result_files = sorted(run_dir.glob("*/result.json"))
    single = run_dir / "result.json"
    if single.exists():
        result_files.insert(0, single)
    if not result_files:
        raise SystemExit(f"no result.json found under {run_dir}")
    results = [json.loads(p.read_text(encoding="utf-8")) for p in result_files]
    labels = None
    if args.labels:
        labels = json.loads(Path(args.labels).read_text(encoding="utf-8"))
    summary = reporting.summarize_run(results, labels=labels)
    sys.stdout.write(reporting.render_report(summary, args.format).decode("utf-8"))
    return 0


def cmd_views(args) -> int:
    task = load_task_file(args.task)
    pairs = eligible_agents(task, args.budget)
    if args.agent:
        pairs = [(a, b) for a, b in pairs if a.agent_id == args.agent]
        if not pairs:
            raise SystemExit(f"agent {args.agent!r} is not eligible for this task")
    if not pairs:
        print("task is ineligible under the view budget")
        return 1
    for config, bundle in pairs:
        print(f"== agent {config.agent_id} (estimated {bundle.token_estimate} tokens)")
        for index, (inp, out) in enumerate(bundle.train):
            for label, views in (("input", inp), ("output", out)):
                for kind, text in (
                    ("grid_view", views.grid_view),
                    ("object_view", views.object_view),
                    ("pixel_view", views.pixel_view),
                ):
                    if text is not None:
                        print(f"train[{index}].{label}.{kind}: {text}")
        for index, views in enumerate(bundle.test_inputs):
            for kind, text in (
                ("grid_view", views.grid_view),
                ("object_view", views.object_view),
                ("pixel_view", views.pixel_view),
            ):
                if text is not None:
                    print(f"test[{index}].input.{kind}: {text}")
    return 0


def cmd_exec(args) -> int:
    program_text = Path(args.program).read_text(encoding="utf-8")
    chars, numeric = _load_grid_file(Path(args.grid))
    try:
        out = run_program(program_text, chars)
    except ExecError as err:
        print(json.dumps({"error": err.to_dict()}, ensure_ascii=False))
        return 1
    print(json.dumps(chars_to_grid(out) if numeric else out, ensure_ascii=False))
    return 0


def cmd_prompts(args) -> int:
    if args.agent:
        from .views import AgentConfig

        known = {}
        for base in standard_agent_configs():
            for grid_view in (True, False):
                variant = AgentConfig(base.object_view, base.pixel_view, grid_view)
                known[variant.agent_id] = variant
        for grid_view in (True, False):
            variant = AgentConfig(None, True, grid_view)
            known[variant.agent_id] = variant
        config = known.get(args.agent)
        if config is None:
            raise SystemExit(f"unknown agent id {args.agent!r}")
        print(build_system_prompt(config, include_all_functions=args.all_functions))
        return 0
    for name, text in all_templates().items():
        print(f"===== {name} =====")
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcagents",
        description="Solve ARC tasks by sampling LLM expert agents over grid abstraction views.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the full pipeline on one task file")
    p.add_argument("--task", type=Path, required=True)
    _add_run_options(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("batch", help="run the pipeline over a directory of task files")
    p.add_argument("--dir", type=Path, required=True)
    _add_run_options(p)
    p.set_defaults(fn=cmd_batch)

    p = sub.add_parser("report", help="aggregate run results into a report")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument("--format", choices=("json", "md", "html"), default="json")
    p.add_argument("--labels", type=Path, help="JSON map task_id -> {description_correct: bool}")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("views", help="print a task's abstraction views per agent")
    p.add_argument("--task", type=Path, required=True)
    p.add_argument("--agent", help="only this agent id")
    p.add_argument("--budget", type=int, default=DEFAULT_VIEW_BUDGET)
    p.set_defaults(fn=cmd_views)

    p = sub.add_parser("exec", help="run a transform program on a grid file")
    p.add_argument("--program", type=Path, required=True)
    p.add_argument("--grid", type=Path, required=True)
    p.set_defaults(fn=cmd_exec)

    p = sub.add_parser("prompts", help="dump the prompt templates for audit")
    p.add_argument("--agent", help="assemble the system prompt for this agent id")
    p.add_argument("--all-functions", action="store_true")
    p.set_defaults(fn=cmd_prompts)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
