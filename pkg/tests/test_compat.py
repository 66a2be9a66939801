import numpy as np
from hypothesis import given, settings

from greybox.automata import MealyMachine, nfa_accepts
from greybox.compat import (
    Preorder,
    compute_compat,
    direct_simulation,
    harmonized_identifiers,
    is_reduced,
    minimize,
    quotient_by_simulation,
)

from conftest import context_nfas, mealy_machines, words_upto

# shortest separating words found by enumerating L_A(q) up to length 8
BRUTE_WITNESSES = {
    (0, 1, 0): (0, 1, 0),
    (0, 2, 0): (0,),
    (1, 2, 0): (0,),
    (0, 1, 1): (),
    (0, 2, 1): (1, 1, 0),
    (1, 2, 1): (1, 1, 0),
    (0, 1, 2): (),
    (0, 2, 2): (1, 0),
    (1, 2, 2): (1, 0),
}


def test_witnesses_match_enumeration(m3, a3):
    table = compute_compat(m3, a3)
    for (s, t, q), w in BRUTE_WITNESSES.items():
        assert table.witness(s, t, q) == w
        assert table.witness(t, s, q) == w
        assert table.split[q, s, t] == len(w)
    assert table.n_rounds == 3


def test_partitions(m3, a3):
    table = compute_compat(m3, a3)
    assert table.partition(0) == [[0], [1], [2]]
    assert table.partition(1) == [[0, 1], [2]]
    assert table.partition_at_round(0, 1) == [[0, 1], [2]]
    assert "~1: {0,1} {2}" in table.dump()


def _brute_split(m, a, q, s, t, length=7):
    for w in words_upto(m.n_inputs, length):
        if nfa_accepts(a, w, q) and m.output(w, s) != m.output(w, t):
            return len(w)
    return 0


@settings(max_examples=60, deadline=None)
@given(mealy_machines(), context_nfas())
def test_split_lengths_agree_with_enumeration(m, a):
    table = compute_compat(m, a)
    for q in range(a.n_states):
        for s in range(m.n_states):
            for t in range(m.n_states):
                assert table.split[q, s, t] == _brute_split(m, a, q, s, t)


@settings(max_examples=40, deadline=None)
@given(mealy_machines(), context_nfas())
def test_cross_table_agrees_with_enumeration(m, a):
    table = compute_compat(m, a)
    for q in range(a.n_states):
        for r in range(a.n_states):
            for s in range(m.n_states):
                for t in range(m.n_states):
                    expected = 0
                    for w in words_upto(2, 7):
                        if nfa_accepts(a, w, q) and nfa_accepts(a, w, r) and m.output(w, s) != m.output(w, t):
                            expected = len(w)
                            break
                    assert table.cross[q, r, s, t] == expected


@settings(max_examples=60, deadline=None)
@given(mealy_machines(), context_nfas())
def test_witness_is_in_context_and_separates(m, a):
    table = compute_compat(m, a)
    for q in range(a.n_states):
        for s in range(m.n_states):
            for t in range(s + 1, m.n_states):
                w = table.witness(s, t, q)
                if table.incompatible(s, t, q):
                    assert nfa_accepts(a, w, q)
                    assert m.output(w, s) != m.output(w, t)
                    assert len(w) <= m.n_states * a.n_states


def test_direct_simulation_on_fixture(a3):
    pre = direct_simulation(a3)
    assert pre.strict_pairs() == [(1, 2)]
    assert pre(1, 2) and not pre(2, 1)
    assert not pre.is_trivial()


@settings(max_examples=80, deadline=None)
@given(context_nfas())
def test_simulation_underapproximates_inclusion(a):
    pre = direct_simulation(a)
    assert pre.leq.diagonal().all()
    assert ((pre.leq.astype(int) @ pre.leq.astype(int) > 0) <= pre.leq).all()
    words = list(words_upto(a.n_symbols, 5))
    for p, q in pre.strict_pairs():
        assert all(nfa_accepts(a, w, q) for w in words if nfa_accepts(a, w, p))


@settings(max_examples=60, deadline=None)
@given(context_nfas())
def test_quotient_preserves_language(a):
    q, cls = quotient_by_simulation(a, direct_simulation(a))
    assert q.n_states == len(set(cls))
    for w in words_upto(a.n_symbols, 5):
        assert nfa_accepts(q, w) == nfa_accepts(a, w)


def test_identity_preorder():
    pre = Preorder.identity(3)
    assert pre.is_trivial()
    assert pre.n_states == 3
    assert (pre.leq == np.eye(3, dtype=bool)).all()


def test_harmonized_identifiers(m3, a3):
    table = compute_compat(m3, a3)
    fam = harmonized_identifiers(m3, a3, table)
    assert fam[(0, 1)] == ((1, 1, 0),)
    assert fam[(0, 1)] == fam[(1, 1)]
    for (s, q), ws in fam.items():
        for (t, r), vs in fam.items():
            if q == r and table.incompatible(s, t, q):
                shared = set(ws) & set(vs)
                assert any(m3.output(w, s) != m3.output(w, t) for w in shared)


def test_minimize():
    m = MealyMachine(1, 2, [[1], [2], [1]], [[0], [1], [1]], 0)
    reduced, cls = minimize(m)
    assert reduced.n_states == 2
    assert cls == [0, 1, 1]
    assert is_reduced(reduced)
    assert not is_reduced(m)
    for w in words_upto(1, 6):
        assert reduced.output(w) == m.output(w)
