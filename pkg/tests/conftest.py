from __future__ import annotations

import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for randmodels

from causelab.cli import corpus_dir
from causelab.dsl import parse_model, parse_states

_ACCEPTANCE: dict[int, tuple[str, bool]] = {}
_CRITERION_RE = re.compile(r"test_criterion_(\d+)_([a-z0-9_]+)")


@pytest.fixture(scope="session")
def corpus():
    """Parsed corpus models and state declarations, keyed by name."""
    base = corpus_dir()
    models = {}
    for entry in sorted(base.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".cm"):
            model, order = parse_model(entry.read_text(), origin=entry.name)
            models[model.name] = (model, order)
    states = {}
    for entry in sorted(base.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".ce"):
            for decl in parse_states(entry.read_text(), origin=entry.name):
                states[decl.name] = decl
    return {"models": models, "states": states}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    match = _CRITERION_RE.match(item.name)
    if match and "test_acceptance" in item.nodeid:
        number = int(match.group(1))
        _ACCEPTANCE[number] = (match.group(2), report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for number in sorted(_ACCEPTANCE):
        name, passed = _ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"  criterion {number} ({name}): {status}")
