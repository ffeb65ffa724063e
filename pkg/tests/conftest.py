import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from convexmatch.core import Coloring

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracle():
    return json.loads((DATA / "oracle_values.json").read_text())


def colorings(min_size=1, max_size=24):
    return st.lists(st.integers(0, 1), min_size=min_size, max_size=max_size).map(
        lambda xs: Coloring(tuple(xs)))


@st.composite
def balanced(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations([0] * n + [1] * n))
    return Coloring(tuple(perm))


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    def emit(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
