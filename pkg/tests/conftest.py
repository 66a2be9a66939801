import itertools

import pytest
from hypothesis import strategies as st

from greybox.automata import ContextNfa, MealyMachine


@pytest.fixture
def m3():
    """Three states; separating words need up to three symbols under the context below."""
    return MealyMachine(2, 2, [[1, 2], [2, 2], [0, 1]], [[0, 1], [0, 1], [1, 1]], 0)


@pytest.fixture
def a3():
    """Context where L(1) ⊆ L(2) and state 1 only ever reads input 1."""
    return ContextNfa(2, [[{1, 2}, {1}], [set(), {1, 2}], [set(), {0, 2}]], 0)


def words_upto(n_symbols, length):
    for n in range(length + 1):
        yield from itertools.product(range(n_symbols), repeat=n)


@st.composite
def mealy_machines(draw, max_states=3, n_inputs=2, n_outputs=2):
    n = draw(st.integers(1, max_states))
    nxt = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=n_inputs, max_size=n_inputs), min_size=n, max_size=n))
    out = draw(
        st.lists(st.lists(st.integers(0, n_outputs - 1), min_size=n_inputs, max_size=n_inputs), min_size=n, max_size=n)
    )
    return MealyMachine(n_inputs, n_outputs, nxt, out, 0)


@st.composite
def context_nfas(draw, max_states=3, n_symbols=2):
    n = draw(st.integers(1, max_states))
    succ = st.frozensets(st.integers(0, n - 1), max_size=n)
    delta = draw(st.lists(st.lists(succ, min_size=n_symbols, max_size=n_symbols), min_size=n, max_size=n))
    return ContextNfa(n_symbols, delta, 0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
