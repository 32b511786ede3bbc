CRITERIA = {
    "c01": "primitive and conditional function asserts (verbatim, <1s)",
    "c02": "view serializations byte-exact for the d037b0a7 grid",
    "c03": "recorded transform-program fixtures (solve, error, try/except)",
    "c04": "object/pixel extraction equals brute-force oracles (1000 grids)",
    "c05": "geometric group-law property suite (1000 grids per law)",
    "c06": "scripted end-to-end pipeline scenarios (<5s, offline)",
    "c07": "record/replay determinism (bit-identical artifacts)",
    "c08": "context-budget eligibility filter",
    "c09": "live-mode smoke test (optional, env-gated)",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = []
    for status in ("passed", "failed", "error", "skipped"):
        reports.extend(terminalreporter.stats.get(status, []))
    by_criterion: dict[str, list] = {}
    for report in reports:
        nodeid = getattr(report, "nodeid", "")
        if "test_acceptance.py::test_" not in nodeid:
            continue
        name = nodeid.split("::test_", 1)[1]
        key = name.split("_", 1)[0]
        if key in CRITERIA:
            by_criterion.setdefault(key, []).append(report)
    if not by_criterion:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA):
        reports = by_criterion.get(key)
        if not reports:
            continue
        if any(r.outcome == "failed" for r in reports):
            verdict = "FAIL"
        elif all(r.outcome == "skipped" for r in reports):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"{verdict} {key}: {CRITERIA[key]}")
