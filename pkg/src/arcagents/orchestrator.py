"""The solve pipeline: enumerate expert agents, sample programs, run the
feedback loop, filter on demonstrations and adjudicate against the tests.

Each of the twenty agents is sampled three times; every sample may take
up to three iterations. A parse or execution failure triggers the
compile-error feedback template; a clean run whose outputs mismatch
triggers the output-error template, in which the produced grids become
the new inputs, so later iterations extend a program chain whose stages
apply in sequence. A sample whose final program maps its inputs onto the
expected outputs contributes a candidate chain. Candidates passing all
demonstrations are deduplicated; up to three are picked (seeded) and any
of them matching every test output exactly counts as a solve.
"""

import json
import logging
import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .gateway import CassetteMiss, Gateway, TransportError
from .prompting import (
    NO_FEEDBACK,
    BudgetExceeded,
    CotResponse,
    FeedbackState,
    ResponseUnparseable,
    build_prompt_bundle,
    compile_feedback,
    output_feedback,
    parse_cot_response,
)
from .taskmodel import Grid, Task, chars_to_grid, grid_to_chars
from .translang import ExecError, ExecLimits, Program, execute_program, parse_program
from .views import (
    DEFAULT_VIEW_BUDGET,
    AgentConfig,
    Tokenizer,
    ViewBundle,
    eligible_agents,
)

log = logging.getLogger(__name__)

UNPARSEABLE_NOTE = "your output was not valid JSON"
RAW_SNIPPET_LIMIT = 1200


@dataclass(frozen=True)
class RunConfig:
    samples_per_agent: int = 3
    max_iterations: int = 3
    view_budget_tokens: int = DEFAULT_VIEW_BUDGET
    seed: int = 0
    candidate_picks: int = 3
    max_workers: int = 1
    agents: tuple[str, ...] | None = None  # restrict to these agent ids
    early_stop: bool = False
    include_all_functions: bool = False
    limits: ExecLimits = field(default_factory=ExecLimits)
    tokenizer: Tokenizer | None = None


@dataclass
class AttemptRecord:
    agent_id: str
    sample_index: int
    iteration: int
    request_fingerprint: str | None = None
    raw_response: str | None = None
    cot: CotResponse | None = None
    parse_error: str | None = None
    exec_results: list = field(default_factory=list)
    feedback_kind: str = "none"
    failure: str | None = None

    def to_dict(self) -> dict:
        return {
            "agent_id": self.agent_id,
            "sample_index": self.sample_index,
            "iteration": self.iteration,
            "request_fingerprint": self.request_fingerprint,
            "raw_response": self.raw_response,
            "cot": self.cot.to_wire() if self.cot else None,
            "parse_error": self.parse_error,
            "exec_results": self.exec_results,
            "feedback_kind": self.feedback_kind,
            "failure": self.failure,
        }


@dataclass
class Candidate:
    """A program chain that reproduced every demonstration output."""

    texts: tuple[str, ...]
    programs: tuple[Program, ...]
    agent_id: str
    sample_index: int
    iteration: int
    via: str  # no | after_compile_error | after_output_error

    @property
    def key(self) -> str:
        return normalize_program_text("\n---\n".join(self.texts))


@dataclass
class SampleResult:
    attempts: list[AttemptRecord]
    candidate: Candidate | None


@dataclass
class TaskResult:
    task_id: str
    status: str  # solved | partial | unsolved | ineligible | ungraded
    candidate_pool_size: int = 0
    picked: list = field(default_factory=list)
    winning: list = field(default_factory=list)
    solved_via_feedback: str = "no"
    per_agent: dict = field(default_factory=dict)
    attempts_total: int = 0
    patterns: list = field(default_factory=list)
    test_verdicts: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "status": self.status,
            "candidate_pool_size": self.candidate_pool_size,
            "picked": self.picked,
            "winning": self.winning,
            "solved_via_feedback": self.solved_via_feedback,
            "per_agent": self.per_agent,
            "attempts_total": self.attempts_total,
            "patterns": self.patterns,
            "test_verdicts": self.test_verdicts,
        }


def normalize_program_text(text: str) -> str:
    """Whitespace-collapsed form used to deduplicate candidates."""
    return re.sub(r"\s+", " ", text).strip()


def enumerate_agents(task: Task, config: RunConfig | None = None) -> list[AgentConfig]:
    """The agent configs that will run for this task (empty if ineligible)."""
    config = config or RunConfig()
    pairs = eligible_agents(task, config.view_budget_tokens, config.tokenizer)
    if config.agents is not None:
        pairs = [(a, b) for a, b in pairs if a.agent_id in config.agents]
    return [a for a, _ in pairs]


def _pair_outcome(program: Program, grid_chars, expected_chars, limits: ExecLimits) -> dict:
    try:
        out = execute_program(program, grid_chars, limits)
    except ExecError as err:
        return {"verdict": "error", "output": None, "error": err.to_dict(), "diff_cells": None}
    if out == expected_chars:
        return {"verdict": "pass", "output": out, "error": None, "diff_cells": 0}
    diff = None
    if len(out) == len(expected_chars) and len(out[0]) == len(expected_chars[0]):
        diff = sum(
            1
            for r in range(len(out))
            for c in range(len(out[0]))
            if out[r][c] != expected_chars[r][c]
        )
    return {"verdict": "mismatch", "output": out, "error": None, "diff_cells": diff}


def evaluate_candidate(program: Program, pairs: list[tuple[Grid, Grid]], limits: ExecLimits | None = None) -> list[dict]:
    """Per-pair verdicts for one program over (input, expected) grids."""
    limits = limits or ExecLimits()
    return [
        _pair_outcome(program, grid_to_chars(inp), grid_to_chars(out), limits)
        for inp, out in pairs
    ]


def run_chain(programs, grid_chars, limits: ExecLimits):
    """Apply a program chain stage by stage; raises ExecError on failure."""
    current = grid_chars
    for program in programs:
        current = execute_program(program, current, limits)
    return current


def evaluate_chain(programs, pairs: list[tuple[Grid, Grid | None]], limits: ExecLimits | None = None) -> list[dict]:
    """Per-pair verdicts for a chain; pairs with a None output are ungraded."""
    limits = limits or ExecLimits()
    verdicts = []
    for inp, out in pairs:
        try:
            produced = run_chain(programs, grid_to_chars(inp), limits)
        except ExecError as err:
            verdicts.append({"verdict": "error", "output": None, "error": err.to_dict()})
            continue
        if out is None:
            verdicts.append({"verdict": "ungraded", "output": produced, "error": None})
        elif produced == grid_to_chars(out):
            verdicts.append({"verdict": "pass", "output": produced, "error": None})
        else:
            verdicts.append({"verdict": "mismatch", "output": produced, "error": None})
    return verdicts


def run_sample(
    task: Task,
    bundle: ViewBundle,
    sample_index: int,
    gateway: Gateway,
    config: RunConfig,
) -> SampleResult:
    """One sample: the base prompt plus up to two feedback iterations."""
    agent_id = bundle.config.agent_id
    attempts: list[AttemptRecord] = []
    feedback: FeedbackState = NO_FEEDBACK
    chain: list[tuple[str, Program]] = []  # committed output-error stages
    current_inputs = [grid_to_chars(p.input) for p in task.train]
    expected = [grid_to_chars(p.output) for p in task.train]

    for iteration in range(1, config.max_iterations + 1):
        record = AttemptRecord(agent_id=agent_id, sample_index=sample_index, iteration=iteration)
        attempts.append(record)
        last = iteration == config.max_iterations
        try:
            prompt = build_prompt_bundle(
                task,
                bundle,
                feedback,
                request_cap_tokens=gateway.params.request_cap_tokens,
                tokenizer=config.tokenizer,
                include_all_functions=config.include_all_functions,
            )
            raw, fingerprint = gateway.complete(prompt)
        except (TransportError, CassetteMiss, BudgetExceeded) as exc:
            # stable marker: the same run recorded and replayed must produce
            # byte-identical attempt records even across backend error types
            record.failure = "gateway_error"
            log.warning(
                "attempt failed (%s sample %d iter %d): %s: %s",
                agent_id, sample_index, iteration, type(exc).__name__, exc,
            )
            return SampleResult(attempts=attempts, candidate=None)
        record.request_fingerprint = fingerprint
        record.raw_response = raw

        try:
            cot = parse_cot_response(raw)
        except ResponseUnparseable as exc:
            record.parse_error = str(exc)
            if not last:
                record.feedback_kind = "compile_error"
                feedback = compile_feedback(
                    prev_code=raw[:RAW_SNIPPET_LIMIT] or "(empty response)",
                    error_message=UNPARSEABLE_NOTE,
                    prev_overall_pattern="(none)",
                )
            continue
        record.cot = cot

        try:
            program = parse_program(cot.program_text)
        except ExecError as err:
            record.exec_results = [
                {"verdict": "error", "output": None, "error": err.to_dict(), "diff_cells": None}
            ]
            if not last:
                record.feedback_kind = "compile_error"
                feedback = compile_feedback(cot.program_text, str(err), cot.overall_pattern)
            continue

        outcomes = [
            _pair_outcome(program, grid, exp, config.limits)
            for grid, exp in zip(current_inputs, expected)
        ]
        record.exec_results = outcomes

        errors = [o for o in outcomes if o["verdict"] == "error"]
        if errors:
            if not last:
                record.feedback_kind = "compile_error"
                first = errors[0]["error"]
                message = f"{first['kind']}: {first['message']}"
                feedback = compile_feedback(cot.program_text, message, cot.overall_pattern)
            continue

        if all(o["verdict"] == "pass" for o in outcomes):
            if feedback.kind == "compile_error":
                via = "after_compile_error"
            elif feedback.kind == "output_error":
                via = "after_output_error"
            else:
                via = "no"
            texts = tuple(text for text, _ in chain) + (cot.program_text,)
            programs = tuple(prog for _, prog in chain) + (program,)
            return SampleResult(
                attempts=attempts,
                candidate=Candidate(
                    texts=texts,
                    programs=programs,
                    agent_id=agent_id,
                    sample_index=sample_index,
                    iteration=iteration,
                    via=via,
                ),
            )

        # clean execution with wrong outputs: the produced grids become the
        # next iteration's inputs and this stage joins the chain
        if not last:
            record.feedback_kind = "output_error"
            chain.append((cot.program_text, program))
            current_inputs = [o["output"] for o in outcomes]
            feedback = output_feedback([chars_to_grid(g) for g in current_inputs])

    return SampleResult(attempts=attempts, candidate=None)


def run_task(
    task: Task,
    gateway: Gateway,
    config: RunConfig | None = None,
    run_dir: str | Path | None = None,
) -> TaskResult:
    """Run every agent x sample, pick candidates, grade against the tests."""
    config = config or RunConfig()
    pairs = eligible_agents(task, config.view_budget_tokens, config.tokenizer)
    if config.agents is not None and pairs:
        known = {a.agent_id for a, _ in pairs}
        missing = [a for a in config.agents if a not in known]
        if missing:
            raise ValueError(f"no eligible agent matches {missing!r}")
        pairs = [(a, b) for a, b in pairs if a.agent_id in config.agents]
    if not pairs:
        result = TaskResult(task_id=task.task_id, status="ineligible")
        _persist(run_dir, [], result)
        return result

    jobs = [
        (agent_index, sample_index, bundle)
        for agent_index, (_, bundle) in enumerate(pairs)
        for sample_index in range(1, config.samples_per_agent + 1)
    ]

    results: dict[tuple[int, int], SampleResult] = {}
    if config.max_workers <= 1:
        for agent_index, sample_index, bundle in jobs:
            results[(agent_index, sample_index)] = run_sample(
                task, bundle, sample_index, gateway, config
            )
            if config.early_stop and results[(agent_index, sample_index)].candidate:
                break
    else:
        with ThreadPoolExecutor(max_workers=config.max_workers) as pool:
            futures = {
                pool.submit(run_sample, task, bundle, sample_index, gateway, config): (
                    agent_index,
                    sample_index,
                )
                for agent_index, sample_index, bundle in jobs
            }
            for future, key in futures.items():
                results[key] = future.result()

    attempts: list[AttemptRecord] = []
    candidates: list[Candidate] = []
    per_agent: dict[str, dict] = {}
    for agent_index, sample_index, bundle in jobs:
        sample = results.get((agent_index, sample_index))
        if sample is None:
            continue
        attempts.extend(sample.attempts)
        stats = per_agent.setdefault(
            bundle.config.agent_id, {"samples": 0, "iterations": 0, "candidates": 0}
        )
        stats["samples"] += 1
        stats["iterations"] += len(sample.attempts)
        if sample.candidate:
            stats["candidates"] += 1
            candidates.append(sample.candidate)

    deduped: list[Candidate] = []
    seen: set[str] = set()
    for candidate in candidates:
        if candidate.key not in seen:
            seen.add(candidate.key)
            deduped.append(candidate)

    picked = deduped
    if len(deduped) > config.candidate_picks:
        rng = random.Random(config.seed)
        picked = rng.sample(deduped, config.candidate_picks)

    test_pairs = [(p.input, p.output) for p in task.test]
    fully_graded = all(p.output is not None for p in task.test)
    winners: list[Candidate] = []
    picked_records = []
    test_verdicts = []
    for candidate in picked:
        verdicts = evaluate_chain(candidate.programs, test_pairs, config.limits)
        graded = [v for v in verdicts if v["verdict"] != "ungraded"]
        passed_graded = all(v["verdict"] == "pass" for v in graded)
        picked_records.append(
            {
                "agent_id": candidate.agent_id,
                "sample_index": candidate.sample_index,
                "iteration": candidate.iteration,
                "via": candidate.via,
                "texts": list(candidate.texts),
            }
        )
        test_verdicts.append([v["verdict"] for v in verdicts])
        if passed_graded:
            winners.append(candidate)

    if not deduped:
        status = "unsolved"
    elif winners and fully_graded:
        status = "solved"
    elif winners:
        status = "ungraded"
    else:
        status = "partial"

    patterns: list[str] = []
    if status in ("unsolved", "partial"):
        seen_patterns: set[str] = set()
        for record in attempts:
            if record.cot and record.cot.overall_pattern not in seen_patterns:
                seen_patterns.add(record.cot.overall_pattern)
                patterns.append(record.cot.overall_pattern)
            if len(patterns) >= 10:
                break

    result = TaskResult(
        task_id=task.task_id,
        status=status,
        candidate_pool_size=len(deduped),
        picked=picked_records,
        winning=[
            {
                "agent_id": w.agent_id,
                "sample_index": w.sample_index,
                "iteration": w.iteration,
                "via": w.via,
                "texts": list(w.texts),
            }
            for w in winners
        ],
        solved_via_feedback=winners[0].via if winners and status == "solved" else "no",
        per_agent=per_agent,
        attempts_total=len(attempts),
        patterns=patterns,
        test_verdicts=test_verdicts,
    )
    _persist(run_dir, attempts, result)
    return result


def _persist(run_dir, attempts: list[AttemptRecord], result: TaskResult) -> None:
    if run_dir is None:
        return
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    with (run_dir / "attempts.jsonl").open("w", encoding="utf-8") as fh:
        for record in attempts:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
    (run_dir / "result.json").write_text(
        json.dumps(result.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
