import json

import pytest

from arcagents.cli import main
from arcagents.taskmodel import load_task_file


def write_task(path, train, test):
    path.write_text(json.dumps({"train": train, "test": test}))
    return path


def simple_task_file(tmp_path, name="abc123.json"):
    return write_task(
        tmp_path / name,
        train=[{"input": [[1]], "output": [[2]]}],
        test=[{"input": [[1]], "output": [[2]]}],
    )


def respond(program):
    return json.dumps(
        {
            "reflection": "r",
            "pixel_changes": "p",
            "object_changes": "o",
            "helper_functions": "h",
            "overall_pattern": "recolor the cell",
            "program_instructions": "i",
            "python_program": program,
        }
    )


RECOLOR = "def transform_grid(grid): return fill_value(grid, (0, 0), 'b')"


def scripted_file(tmp_path, programs):
    path = tmp_path / "responses.json"
    path.write_text(json.dumps([respond(p) for p in programs]))
    return path


def test_solve_scripted(tmp_path, capsys):
    task = simple_task_file(tmp_path)
    responses = scripted_file(tmp_path, [RECOLOR])
    code = main(
        [
            "solve",
            "--task", str(task),
            "--backend", "scripted",
            "--scripted-responses", str(responses),
            "--agents", "mono-none+gv",
            "--samples", "1",
            "--run-dir", str(tmp_path / "run"),
        ]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "solved"
    assert (tmp_path / "run" / "attempts.jsonl").exists()
    assert (tmp_path / "run" / "result.json").exists()


def test_batch_and_report(tmp_path, capsys):
    tasks = tmp_path / "tasks"
    tasks.mkdir()
    simple_task_file(tasks, "t1.json")
    simple_task_file(tasks, "t2.json")
    responses = scripted_file(tmp_path, [RECOLOR, RECOLOR])
    run_dir = tmp_path / "runs"
    code = main(
        [
            "batch",
            "--dir", str(tasks),
            "--backend", "scripted",
            "--scripted-responses", str(responses),
            "--agents", "mono-none+gv",
            "--samples", "1",
            "--run-dir", str(run_dir),
        ]
    )
    assert code == 0
    stdout = capsys.readouterr().out
    assert "t1: solved" in stdout
    assert "eligible 2/2" in stdout
    assert (run_dir / "t1" / "result.json").exists()
    assert (run_dir / "summary.json").exists()

    code = main(["report", "--run", str(run_dir), "--format", "md"])
    assert code == 0
    report = capsys.readouterr().out
    assert "| t1 | solved |" in report


def test_report_with_labels(tmp_path, capsys):
    run_dir = tmp_path / "runs" / "x"
    run_dir.mkdir(parents=True)
    (run_dir / "result.json").write_text(
        json.dumps({"task_id": "x", "status": "unsolved", "patterns": []})
    )
    labels = tmp_path / "labels.json"
    labels.write_text(json.dumps({"x": {"description_correct": True}}))
    code = main(
        ["report", "--run", str(tmp_path / "runs"), "--format", "json", "--labels", str(labels)]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["correct_description"] == 1


def test_views_subcommand(tmp_path, capsys):
    task = simple_task_file(tmp_path)
    code = main(["views", "--task", str(task), "--agent", "mono-none+gv"])
    assert code == 0
    out = capsys.readouterr().out
    assert "== agent mono-none+gv" in out
    assert "train[0].input.grid_view: [['a']]" in out
    assert "test[0].input.grid_view: [['a']]" in out


def test_exec_subcommand_numeric(tmp_path, capsys):
    program = tmp_path / "prog.txt"
    program.write_text(RECOLOR)
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([[0, 0], [0, 0]]))
    code = main(["exec", "--program", str(program), "--grid", str(grid)])
    assert code == 0
    assert json.loads(capsys.readouterr().out) == [[2, 0], [0, 0]]


def test_exec_subcommand_char_grid_and_error(tmp_path, capsys):
    program = tmp_path / "prog.txt"
    program.write_text("def transform_grid(grid): return magic(grid)")
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([["a", "."]]))
    code = main(["exec", "--program", str(program), "--grid", str(grid)])
    assert code == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["error"]["kind"] == "unknown_name"


def test_prompts_dump(capsys):
    code = main(["prompts"])
    assert code == 0
    out = capsys.readouterr().out
    assert "===== system_header =====" in out
    assert "===== output_schema =====" in out
    assert "infer the simplest possible relation" in out


def test_prompts_for_agent(capsys):
    code = main(["prompts", "--agent", "pixel-only+gv"])
    assert code == 0
    out = capsys.readouterr().out
    assert "get_pixel_coords" in out
    assert "get_objects" not in out


def test_record_then_replay_cli(tmp_path, capsys):
    task = simple_task_file(tmp_path)
    responses = scripted_file(tmp_path, [RECOLOR])
    cassette = tmp_path / "cassette.jsonl"
    rec_dir = tmp_path / "rec"
    code = main(
        [
            "solve",
            "--task", str(task),
            "--backend", "scripted",
            "--scripted-responses", str(responses),
            "--agents", "mono-none+gv",
            "--samples", "1",
            "--record",
            "--cassette", str(cassette),
            "--run-dir", str(rec_dir),
        ]
    )
    assert code == 0
    capsys.readouterr()
    replay_dir = tmp_path / "rep"
    code = main(
        [
            "solve",
            "--task", str(task),
            "--backend", "replay",
            "--cassette", str(cassette),
            "--agents", "mono-none+gv",
            "--samples", "1",
            "--run-dir", str(replay_dir),
        ]
    )
    assert code == 0
    capsys.readouterr()
    assert (rec_dir / "attempts.jsonl").read_bytes() == (replay_dir / "attempts.jsonl").read_bytes()
    assert (rec_dir / "result.json").read_bytes() == (replay_dir / "result.json").read_bytes()
