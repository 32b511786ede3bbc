import json
import random

import pytest

from arcagents.objects import ObjectViewConfig
from arcagents.taskmodel import Task, TestPair, TrainPair, load_task
from arcagents.views import (
    AgentConfig,
    build_view_bundle,
    eligible_agents,
    estimate_tokens,
    reference_config,
    render_grid_view,
    render_object_view,
    render_pixel_view,
    standard_agent_configs,
    task_is_eligible,
)

SAMPLE_GRID = [[0, 0, 6], [0, 4, 6], [3, 4, 6]]

OBJECT_VIEW_TEXT = (
    "[{'tl':(0,2),'grid':[['f'],['f'],['f']],'size':(3,1),'cell_count':3,"
    "'shape':[['x'],['x'],['x']]},"
    "{'tl':(1,1),'grid':[['d'],['d']],'size':(2,1),'cell_count':2,"
    "'shape':[['x'],['x']]},"
    "{'tl':(2,0),'grid':[['c']],'size':(1,1),'cell_count':1,'shape':[['x']]}]"
)


def tiny_task(side=3):
    grid = [[1] * side for _ in range(side)]
    return Task(
        task_id="tiny",
        train=(TrainPair(input=grid, output=grid),),
        test=(TestPair(input=grid, output=grid),),
    )


def test_grid_view_serialization():
    assert render_grid_view(SAMPLE_GRID) == "[['.','.','f'],['.','d','f'],['c','d','f']]"
    assert render_grid_view([[0]]) == "[['.']]"


def test_object_view_serialization_matches_reference_text():
    cfg = ObjectViewConfig("mono", "none", True)
    assert render_object_view(SAMPLE_GRID, cfg) == OBJECT_VIEW_TEXT


def test_object_view_empty_grid():
    cfg = ObjectViewConfig("mono", "none", True)
    assert render_object_view([[0, 0], [0, 0]], cfg) == "[]"


def test_object_view_without_more_info_is_field_projection():
    from arcagents.objects import get_objects_by_config
    from arcagents.taskmodel import grid_to_chars

    chars = grid_to_chars(SAMPLE_GRID)
    full = get_objects_by_config(chars, ObjectViewConfig("mono", "none", True))
    brief = get_objects_by_config(chars, ObjectViewConfig("mono", "none", False))
    assert brief == [{"tl": o["tl"], "grid": o["grid"]} for o in full]
    brief_text = render_object_view(SAMPLE_GRID, ObjectViewConfig("mono", "none", False))
    assert "'size'" not in brief_text and "'shape'" not in brief_text


def test_pixel_view_serialization():
    assert (
        render_pixel_view(SAMPLE_GRID)
        == "{'f':[(0,2),(1,2),(2,2)],'d':[(1,1),(2,1)],'c':[(2,0)]}"
    )
    assert render_pixel_view([[0]]) == "{}"


def test_grid_view_injective_on_random_pairs():
    rng = random.Random(5)
    seen = {}
    for _ in range(300):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        grid = [[rng.randint(0, 9) for _ in range(cols)] for _ in range(rows)]
        text = render_grid_view(grid)
        key = tuple(tuple(r) for r in grid)
        if text in seen:
            assert seen[text] == key
        seen[text] = key


def test_serialization_deterministic():
    cfg = ObjectViewConfig("multi", "diag", True)
    a = render_object_view(SAMPLE_GRID, cfg)
    b = render_object_view([list(r) for r in SAMPLE_GRID], cfg)
    assert a == b


def test_estimate_tokens_default_heuristic():
    assert estimate_tokens("") == 0
    assert estimate_tokens("x" * 4000) == 1000
    assert estimate_tokens("x" * 5) == 2
    # monotone in length
    assert estimate_tokens("ab") <= estimate_tokens("abcd")


def test_estimate_tokens_pluggable():
    assert estimate_tokens("anything", tokenizer=lambda t: 42) == 42


def test_default_estimate_vs_reference_bpe_tokenizer():
    tiktoken = pytest.importorskip("tiktoken")
    from arcagents.prompting import build_system_prompt

    text = build_system_prompt(reference_config())
    enc = tiktoken.get_encoding("cl100k_base")
    reference = len(enc.encode(text))
    assert abs(estimate_tokens(text) - reference) <= 0.25 * reference


def test_agent_config_ids_stable():
    configs = standard_agent_configs()
    assert len(configs) == 20
    ids = [c.agent_id for c in configs]
    assert len(set(ids)) == 20
    assert ids[0] == "mono-none+gv"
    assert ids[1] == "mono-none+px+gv"


def test_agent_requires_a_view():
    with pytest.raises(ValueError):
        AgentConfig(object_view=None, pixel_view=False, grid_view=True)


def test_bundle_includes_requested_views():
    task = tiny_task()
    config = standard_agent_configs()[1]
    bundle = build_view_bundle(task, config)
    inp, out = bundle.train[0]
    assert inp.grid_view and inp.object_view and inp.pixel_view
    assert out.size == (3, 3)
    assert bundle.test_inputs[0].grid_view


def test_small_task_gets_all_twenty_agents():
    pairs = eligible_agents(tiny_task())
    assert len(pairs) == 20
    for config, bundle in pairs:
        assert config.grid_view
        assert bundle.token_estimate <= 3000
        assert config.object_view is not None or config.pixel_view


def test_oversized_task_is_ineligible():
    # reference bundle estimate driven over budget by a tiny fake budget
    task = tiny_task(side=12)
    assert task_is_eligible(task)
    assert not task_is_eligible(task, budget_tokens=10)
    assert eligible_agents(task, budget_tokens=10) == []


def test_grid_view_dropped_under_pressure():
    task = tiny_task(side=10)
    reference_estimate = build_view_bundle(task, reference_config()).token_estimate
    target = standard_agent_configs()[1]  # mono-none with pixel view
    full = build_view_bundle(task, target).token_estimate
    slim = build_view_bundle(
        task, AgentConfig(target.object_view, target.pixel_view, grid_view=False)
    ).token_estimate
    budget = max(reference_estimate, slim)
    assert budget < full
    pairs = eligible_agents(task, budget_tokens=budget)
    assert pairs
    assert not any(b.token_estimate > budget for _, b in pairs)
    trimmed = [c for c, _ in pairs if not c.grid_view]
    assert trimmed, "expected some agents to drop grid view"
    assert any(c.agent_id == "mono-none+px" for c in trimmed)
    for config in trimmed:
        assert config.object_view is not None or config.pixel_view


def test_never_returns_over_budget_bundle():
    task = tiny_task(side=6)
    for budget in (50, 120, 300, 3000):
        if not task_is_eligible(task, budget_tokens=budget):
            continue
        for _, bundle in eligible_agents(task, budget_tokens=budget):
            assert bundle.token_estimate <= budget


def test_replacement_train_inputs():
    task = tiny_task()
    replacement = [[2, 2], [2, 2]]
    bundle = build_view_bundle(task, reference_config(), train_inputs=[replacement])
    inp, out = bundle.train[0]
    assert inp.grid_view == render_grid_view(replacement)
    assert out.grid_view == render_grid_view(task.train[0].output)
    with pytest.raises(ValueError):
        build_view_bundle(task, reference_config(), train_inputs=[replacement, replacement])


def test_eligibility_count_over_generated_corpus():
    rng = random.Random(41)
    docs = []
    for i in range(30):
        side = rng.choice([2, 3, 4, 25, 28, 30])
        fill = rng.randint(0, 9)
        grid = [[fill] * side for _ in range(side)]
        docs.append(
            {
                "train": [{"input": grid, "output": grid}] * 2,
                "test": [{"input": grid, "output": grid}],
            }
        )
    tasks = [load_task(json.dumps(d), task_id=str(i)) for i, d in enumerate(docs)]
    eligible = [t for t in tasks if task_is_eligible(t)]
    # big dense grids produce object/grid views beyond 3000 tokens
    assert 0 < len(eligible) < len(tasks)
