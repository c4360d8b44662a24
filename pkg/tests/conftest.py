"""Shared fixtures and the acceptance-suite summary hook."""
from __future__ import annotations

import re
from pathlib import Path

import pytest

from storyeval.corpus import load_score_matrix

DATA_DIR = Path(__file__).parent / "data"
HUMAN_ROW = "Humans"


@pytest.fixture(scope="session")
def reference_matrix():
    """The shipped 14-model x 16-metric lexical score table."""
    return load_score_matrix(DATA_DIR / "lexical_scores.csv", human_row=HUMAN_ROW)


@pytest.fixture
def stories_file(tmp_path):
    """Factory writing a JSONL story file from (story_id, model, sentences)."""
    import json

    def write(records, name="stories.jsonl"):
        path = tmp_path / name
        with path.open("w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record) + "\n")
        return path

    return write


_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion."""
    rows: dict[int, tuple[str, str]] = {}
    for outcome, label in (
        ("passed", "PASS"),
        ("failed", "FAIL"),
        ("error", "FAIL"),
        ("skipped", "SKIP"),
    ):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION_RE.search(getattr(report, "nodeid", ""))
            if match:
                number = int(match.group(1))
                rows[number] = (label, match.group(2).replace("_", " "))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(rows):
        label, name = rows[number]
        terminalreporter.write_line(f"criterion {number:2d}: {label} - {name}")
