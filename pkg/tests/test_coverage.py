import pytest
from hypothesis import given, settings

from greybox.compat import Preorder, compute_compat, direct_simulation
from greybox.coverage import Cover, cover, dominates, is_core, reduce_core, v_leq, v_norm, weak_core
from greybox.automata import product_bfs

from conftest import context_nfas, mealy_machines


def test_weak_core_of_fixture(m3, a3):
    table = compute_compat(m3, a3)
    core = weak_core(m3, a3, table)
    # seven classes of equivalent reachable locations, counted by pairwise enumeration
    assert len(core) == 7
    assert core == [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 0), (1, 0)]


def test_reduced_core_drops_dominated(m3, a3):
    table = compute_compat(m3, a3)
    pre = direct_simulation(a3)
    reduced = reduce_core(weak_core(m3, a3, table), table, pre)
    assert reduced == [(0, 0), (1, 2), (2, 2), (2, 0), (1, 0)]
    assert dominates(table, pre, (1, 2), (1, 1))
    assert dominates(table, pre, (1, 2), (0, 1))
    assert not dominates(table, pre, (1, 1), (1, 2))
    assert is_core(table, pre, reduced, product_bfs(m3, a3)[0])


def test_cover_of_fixture(m3, a3):
    table = compute_compat(m3, a3)
    core = reduce_core(weak_core(m3, a3, table), table, direct_simulation(a3))
    v, to_cvr = cover(m3, a3, core)
    assert v.ordered() == [(), (0,), (0, 1), (0, 1, 1)]
    assert to_cvr[(1, 0)] == (0, 1, 1)


def test_cover_must_be_prefix_closed():
    with pytest.raises(ValueError):
        Cover(frozenset({(), (0, 1)}))
    with pytest.raises(ValueError):
        Cover(frozenset({(0,)}))


def test_v_norm_and_order():
    v = Cover(frozenset({(), (0,), (0, 1)}))
    assert v_norm(v, (0, 1, 1, 0)) == 2
    assert v_norm(v, (1, 0)) == 2
    assert v_norm(v, (0,)) == 0
    assert v_leq(v, (0, 1, 1), (0, 1, 1, 0))
    assert not v_leq(v, (0,), (0, 1, 1))
    assert not v_leq(v, (1,), (0, 1))


@settings(max_examples=80, deadline=None)
@given(mealy_machines(), context_nfas())
def test_cores_cover_every_reachable_location(m, a):
    table = compute_compat(m, a)
    locs = product_bfs(m, a)[0]
    weak = weak_core(m, a, table)
    assert is_core(table, Preorder.identity(a.n_states), weak, locs)
    for x in weak:
        for y in weak:
            if x != y and x[1] == y[1]:
                assert table.incompatible(x[0], y[0], x[1])
    pre = direct_simulation(a)
    reduced = reduce_core(weak, table, pre)
    assert set(reduced) <= set(weak)
    assert is_core(table, pre, reduced, locs)
    v, to_cvr = cover(m, a, reduced)
    for (s, q), w in to_cvr.items():
        assert w in v and m.state_after(w) == s
