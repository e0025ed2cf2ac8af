import json
from pathlib import Path

import pytest

from treembed.textio import parse_pattern, parse_tree

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"

# criterion number -> (description, outcome); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def fig1():
    trees = {f"t{i}": parse_tree((DATA / f"t{i}.tree").read_text()) for i in range(4)}
    pattern = parse_pattern((DATA / "p0.pat").read_text())
    expected = json.loads((GOLDEN / "fig1_matrix.json").read_text())["verdicts"]
    return trees, pattern, expected


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        desc, outcome = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {outcome} - {desc}")
