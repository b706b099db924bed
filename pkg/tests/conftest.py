import random

import pytest
from hypothesis import strategies as st

from acfcodes.core import BinaryCode, worked_example_code


@pytest.fixture
def ex1():
    return worked_example_code()


@st.composite
def codes(draw, max_rows=8, min_cols=3, max_cols=7):
    n = draw(st.integers(1, max_rows))
    t = draw(st.integers(min_cols, max_cols))
    cols = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=t, max_size=t))
    return BinaryCode(n, t, tuple(cols))


def random_code(rng: random.Random, n: int, t: int, density: float = 0.5) -> BinaryCode:
    cols = []
    for _ in range(t):
        c = 0
        for i in range(n):
            if rng.random() < density:
                c |= 1 << i
        cols.append(c)
    return BinaryCode(n, t, tuple(cols))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
