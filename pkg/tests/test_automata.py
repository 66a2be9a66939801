import pytest
from hypothesis import given

from greybox.automata import (
    AlphabetError,
    ContextNfa,
    MealyMachine,
    composite_product,
    image_automaton,
    mealy_run,
    nfa_accepts,
    nfa_step,
    product_bfs,
    split_paired_output,
    universal_nfa,
)

from conftest import context_nfas, mealy_machines, words_upto


def test_run_returns_state_and_outputs(m3):
    assert mealy_run(m3, 0, ()) == (0, ())
    assert mealy_run(m3, 0, (0, 1, 0)) == (0, (0, 1, 1))
    assert m3.output((1, 1)) == (1, 1)


def test_run_rejects_foreign_symbol(m3):
    with pytest.raises(AlphabetError, match="position 1"):
        mealy_run(m3, 0, (0, 2))


def test_machine_must_be_input_complete():
    with pytest.raises(ValueError):
        MealyMachine(2, 2, [[0]], [[0]], 0)
    with pytest.raises(AlphabetError):
        MealyMachine(1, 2, [[0]], [[5]], 0)


def test_nfa_step_and_acceptance(a3):
    assert nfa_step(a3, {0}, (0,)) == frozenset({1, 2})
    assert nfa_step(a3, {0}, (0, 0)) == frozenset()
    assert nfa_accepts(a3, (0, 1, 0))
    assert not nfa_accepts(a3, (0, 0))
    assert nfa_accepts(a3, ())


def test_universal_nfa_accepts_everything():
    u = universal_nfa(3)
    assert all(nfa_accepts(u, w) for w in words_upto(3, 3))


def test_image_accepts_exactly_outputs():
    h = MealyMachine(2, 3, [[1, 0], [1, 0]], [[0, 1], [2, 2]], 0)
    img = image_automaton(h)
    produced = {h.output(w) for w in words_upto(2, 4)}
    for w in words_upto(3, 4):
        assert nfa_accepts(img, w) == (w in produced)


def test_composite_product_matches_cascade():
    h = MealyMachine(2, 2, [[1, 0], [0, 1]], [[0, 1], [1, 1]], 0)
    t = MealyMachine(2, 2, [[1, 1], [0, 0]], [[0, 1], [1, 0]], 0)
    p, pairs = composite_product(h, t)
    assert pairs[0] == (0, 0)
    for w in words_upto(2, 5):
        mid = h.output(w)
        expected = tuple(o * 2 + x for o, x in zip(mid, t.output(mid)))
        assert p.output(w) == expected
    assert split_paired_output(3, 2) == (1, 1)


def test_composite_product_alphabet_mismatch():
    h = MealyMachine(1, 3, [[0]], [[2]], 0)
    t = MealyMachine(2, 2, [[0, 0]], [[0, 0]], 0)
    with pytest.raises(AlphabetError):
        composite_product(h, t)


def test_product_bfs_access_words(m3, a3):
    order, access = product_bfs(m3, a3)
    assert order[0] == (0, 0)
    assert len(order) == 9
    for (s, q), w in access.items():
        assert m3.state_after(w) == s
        assert q in nfa_step(a3, {0}, w)


@given(mealy_machines(), context_nfas())
def test_bfs_access_words_are_shortest(m, a):
    _, access = product_bfs(m, a)
    seen = {}
    for w in words_upto(2, 6):
        for q in nfa_step(a, {a.initial}, w):
            seen.setdefault((m.state_after(w), q), len(w))
    for loc, w in access.items():
        if loc in seen:
            assert len(w) == seen[loc]
    assert set(seen) <= set(access)


def test_nfa_validation():
    with pytest.raises(ValueError):
        ContextNfa(1, [[{3}]], 0)
