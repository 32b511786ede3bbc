# The full pipeline, end to end, with no network: a scripted backend
# stands in for the chat endpoint. The task wants a 180-degree rotation;
# the first scripted reply only flips horizontally, so its wrong outputs
# are fed back as the new inputs and the second reply finishes the job
# with a vertical flip. The solving chain is hflip then vflip.

import json

from arcagents import (
    ChatParams,
    Gateway,
    RunConfig,
    ScriptedBackend,
    Task,
    TestPair,
    TrainPair,
    render_report,
    run_task,
    summarize_run,
)


def reply(program, pattern):
    return json.dumps(
        {
            "reflection": "comparing the pairs",
            "pixel_changes": "pixels move to mirrored positions",
            "object_changes": "objects keep shape but move",
            "helper_functions": "horizontal_flip, vertical_flip",
            "overall_pattern": pattern,
            "program_instructions": "apply the flip helpers",
            "python_program": program,
        }
    )


task = Task(
    task_id="rot180-demo",
    train=(TrainPair(input=[[1, 2], [3, 4]], output=[[4, 3], [2, 1]]),),
    test=(TestPair(input=[[5, 6], [7, 8]], output=[[8, 7], [6, 5]]),),
)

gateway = Gateway(
    backend=ScriptedBackend(
        [
            reply("def transform_grid(grid): return horizontal_flip(grid)",
                  "mirror the grid left to right"),
            reply("def transform_grid(grid): return vertical_flip(grid)",
                  "mirror the grid top to bottom"),
        ]
    ),
    params=ChatParams(model_id="scripted", temperature=0.7),
)

# One agent and one sample keep the demo tiny; a real run enumerates all
# twenty agents, three samples each, up to three feedback iterations.
config = RunConfig(samples_per_agent=1, agents=("mono-none+gv",), seed=0)
result = run_task(task, gateway, config, run_dir="demo-run")

print("status:            ", result.status)
print("via feedback:      ", result.solved_via_feedback)
print("candidate pool:    ", result.candidate_pool_size)
print("winning chain:")
for stage in result.winning[0]["texts"]:
    print("   ", stage)

# Results aggregate into the run-level report: totals, feedback-assisted
# solves and which view combination won each task.
summary = summarize_run([result])
print("\n" + render_report(summary, "md").decode("utf-8"))
print("artifacts written to demo-run/ (attempts.jsonl, result.json)")
