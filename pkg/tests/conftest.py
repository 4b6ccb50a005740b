from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from dnainfo import DnaSequence

DATA = Path(__file__).parent / "data"

dna_text = st.text(alphabet="ATGC", min_size=1, max_size=300)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_dna(rng, n, id="r"):
    return DnaSequence(rng.integers(0, 4, size=n, dtype=np.uint8), id)


_criteria = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _criteria.append((value, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
