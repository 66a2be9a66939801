"""Ground truth: restricted equivalence, exhaustive k-completeness and mutant scoring."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .automata import ContextNfa, MealyMachine, _check_alphabets
from .suite import SuiteTree

ENUMERATION_LIMIT = 10**8


class TooLarge(ValueError):
    """The instance is outside the range the exhaustive check accepts."""


def restricted_equiv(m: MealyMachine, n: MealyMachine, a: ContextNfa):
    """True if ``m`` and ``n`` agree on all of L_A, else a shortest word of L_A separating them."""
    _check_alphabets(m, a)
    if n.n_inputs != m.n_inputs:
        raise ValueError("machines disagree on the input alphabet")
    start = (m.initial, n.initial, a.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        s, t, q = node = queue.popleft()
        for i in range(m.n_inputs):
            succ = a.delta[q][i]
            if not succ:
                continue
            if m.out[s][i] != n.out[t][i]:
                return _path(parent, node) + (i,)
            for b in sorted(succ):
                nxt = (m.next[s][i], n.next[t][i], b)
                if nxt not in parent:
                    parent[nxt] = (node, i)
                    queue.append(nxt)
    return True


def _path(parent, node) -> tuple:
    word = []
    while parent[node] is not None:
        node, i = parent[node]
        word.append(i)
    return tuple(reversed(word))


def failing_test(m: MealyMachine, n: MealyMachine, suite: SuiteTree) -> int | None:
    """Index of the first maximal test (lexicographic order) on which ``n`` deviates from ``m``."""
    for idx, w in enumerate(suite.maximal_tests()):
        if m.output(w) != n.output(w):
            return idx
    return None


def suite_passes(m: MealyMachine, n: MealyMachine, suite: SuiteTree) -> bool:
    """M ~_E N: equal outputs on every test of the suite."""
    stack = [(suite.root, n.initial)]
    while stack:
        node, t = stack.pop()
        for i, child in node.children.items():
            if n.out[t][i] != child.out:
                return False
            stack.append((child, n.next[t][i]))
    return True


@dataclass
class Verdict:
    complete: bool
    counterexample: MealyMachine | None = None
    witness: tuple | None = None

    def to_json(self) -> str:
        from .formats import dump_mealy

        record = {"verdict": "complete" if self.complete else "counterexample"}
        if self.counterexample is not None:
            record["counterexample"] = dump_mealy(self.counterexample)
            record["witness"] = list(self.witness)
        return json.dumps(record, sort_keys=True)


def enumeration_size(n_inputs: int, n_outputs: int, k: int) -> int:
    return k ** (n_inputs * k) * n_outputs ** (n_inputs * k)


def _check_guard(m: MealyMachine, k: int) -> None:
    size = enumeration_size(m.n_inputs, m.n_outputs, k)
    if size > ENUMERATION_LIMIT:
        raise TooLarge(f"exhaustive check over {size} machines exceeds the limit of {ENUMERATION_LIMIT}")


def completeness_check(m: MealyMachine, a: ContextNfa, suite: SuiteTree, k: int) -> Verdict:
    """Decide whether every machine with at most k states passing ``suite`` agrees with ``m`` on L_A.

    Instead of enumerating complete machines one by one, the search assigns
    transitions lazily while replaying the suite, so each branch stands for
    all completions of a partial machine.  A partial machine that passes the
    suite admits a failing completion iff the product with ``m`` and ``a``
    reaches an output mismatch or an undefined transition that L_A can take.
    """
    _check_alphabets(m, a)
    _check_guard(m, k)
    order = []
    queue = deque([suite.root])
    while queue:
        node = queue.popleft()
        order.append(node)
        queue.extend(node.children[i] for i in sorted(node.children))
    index = {id(node): j for j, node in enumerate(order)}
    parent_idx = [index[id(node.parent)] if node.parent is not None else -1 for node in order]
    state = [0] * len(order)

    def search(j: int, trans: dict, n_used: int):
        while j < len(order):
            node = order[j]
            p = state[parent_idx[j]]
            hit = trans.get((p, node.symbol))
            if hit is None:
                break
            if hit[1] != node.out:
                return None
            state[j] = hit[0]
            j += 1
        else:
            return _failing_completion(m, a, trans, n_used)
        node = order[j]
        p = state[parent_idx[j]]
        for target in range(min(n_used + 1, k)):
            extended = dict(trans)
            extended[(p, node.symbol)] = (target, node.out)
            found = search(j, extended, max(n_used, target + 1))
            if found is not None:
                return found
        return None

    found = search(1, {}, 1)
    if found is None:
        return Verdict(True)
    n, witness = found
    # re-verify from scratch before reporting
    if not suite_passes(m, n, suite):
        raise AssertionError("counterexample does not pass the suite")
    check = restricted_equiv(m, n, a)
    if check is True:
        raise AssertionError("counterexample agrees with the specification on L_A")
    return Verdict(False, n, check)


def _failing_completion(m: MealyMachine, a: ContextNfa, trans: dict, n_used: int):
    start = (0, m.initial, a.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        p, s, q = node = queue.popleft()
        for i in range(m.n_inputs):
            succ = a.delta[q][i]
            if not succ:
                continue
            hit = trans.get((p, i))
            if hit is None:
                if m.n_outputs < 2:
                    continue
                bad = (m.out[s][i] + 1) % m.n_outputs
                fixed = dict(trans)
                fixed[(p, i)] = (0, bad)
                return _complete(m, fixed, n_used), _path(parent, node) + (i,)
            if hit[1] != m.out[s][i]:
                return _complete(m, trans, n_used), _path(parent, node) + (i,)
            for b in sorted(succ):
                nxt = (hit[0], m.next[s][i], b)
                if nxt not in parent:
                    parent[nxt] = (node, i)
                    queue.append(nxt)
    return None


def _complete(m: MealyMachine, trans: dict, n_states: int) -> MealyMachine:
    nxt = [[trans.get((p, i), (0, 0))[0] for i in range(m.n_inputs)] for p in range(n_states)]
    out = [[trans.get((p, i), (0, 0))[1] for i in range(m.n_inputs)] for p in range(n_states)]
    return MealyMachine(m.n_inputs, m.n_outputs, nxt, out, 0)


def is_canonical(n: MealyMachine) -> bool:
    """All states reachable and numbered in BFS order from state 0 (inputs in index order)."""
    if n.initial != 0:
        return False
    seen = [0]
    pos = 0
    while pos < len(seen):
        s = seen[pos]
        for i in range(n.n_inputs):
            t = n.next[s][i]
            if t not in seen:
                if t != len(seen):
                    return False
                seen.append(t)
        pos += 1
    return len(seen) == n.n_states


def enumerate_machines(n_inputs: int, n_outputs: int, k: int):
    """Every canonical Mealy machine with at most k states."""
    for n in range(1, k + 1):
        cells = n * n_inputs
        for targets in itertools.product(range(n), repeat=cells):
            nxt = [targets[s * n_inputs : (s + 1) * n_inputs] for s in range(n)]
            probe = MealyMachine(n_inputs, 1, nxt, [[0] * n_inputs] * n, 0)
            if not is_canonical(probe):
                continue
            for outs in itertools.product(range(n_outputs), repeat=cells):
                out = [outs[s * n_inputs : (s + 1) * n_inputs] for s in range(n)]
                yield MealyMachine(n_inputs, n_outputs, nxt, out, 0)


def brute_force_completeness(m: MealyMachine, a: ContextNfa, suite: SuiteTree, k: int) -> Verdict:
    """Reference check that enumerates canonical machines one at a time."""
    _check_guard(m, k)
    for n in enumerate_machines(m.n_inputs, m.n_outputs, k):
        if suite_passes(m, n, suite):
            w = restricted_equiv(m, n, a)
            if w is not True:
                return Verdict(False, n, w)
    return Verdict(True)


MUTATIONS = ("transition-retarget", "output-flip", "state-add")


@dataclass(frozen=True)
class MutantSpec:
    base: MealyMachine
    max_states: int
    kinds: tuple = MUTATIONS
    max_edits: int = 3


def sample_mutant(spec: MutantSpec, rng: np.random.Generator) -> MealyMachine:
    m = spec.base
    nxt = [list(row) for row in m.next]
    out = [list(row) for row in m.out]
    ni = m.n_inputs
    for _ in range(int(rng.integers(1, spec.max_edits + 1))):
        kind = spec.kinds[int(rng.integers(len(spec.kinds)))]
        n = len(nxt)
        if kind == "state-add" and n >= spec.max_states:
            kind = "transition-retarget"
        s, i = int(rng.integers(n)), int(rng.integers(ni))
        if kind == "transition-retarget":
            nxt[s][i] = int(rng.integers(n))
        elif kind == "output-flip":
            if m.n_outputs > 1:
                out[s][i] = (out[s][i] + int(rng.integers(1, m.n_outputs))) % m.n_outputs
        else:
            copy = int(rng.integers(n))
            nxt.append(list(nxt[copy]))
            out.append(list(out[copy]))
            nxt[s][i] = n
    return MealyMachine(ni, m.n_outputs, nxt, out, m.initial)


def mutant_kill_rate(
    m: MealyMachine, a: ContextNfa, suite: SuiteTree, spec: MutantSpec, trials: int, seed: int = 0
) -> float:
    """Fraction of sampled mutants that fail the suite or are equivalent to ``m`` on L_A."""
    if m.n_states > spec.max_states:
        raise ValueError("the specification already exceeds the mutant state budget")
    if trials <= 0:
        return 1.0
    rng = np.random.Generator(np.random.Philox(seed))
    killed = 0
    for _ in range(trials):
        n = sample_mutant(spec, rng)
        if not suite_passes(m, n, suite) or restricted_equiv(m, n, a) is True:
            killed += 1
    return killed / trials


def separation_violations(m: MealyMachine, suite: SuiteTree, n: MealyMachine) -> list:
    """Pairs of E-separable tests that ``n`` (assumed to pass the suite) sends to the same state."""
    from .suite import separable_nodes

    if not suite_passes(m, n, suite):
        raise ValueError("the machine must pass the suite")
    nodes = list(suite.nodes())
    reached = {id(node): n.state_after(node.word) for node in nodes}
    bad = []
    for u, v in itertools.combinations(nodes, 2):
        if reached[id(u)] == reached[id(v)] and separable_nodes(u, v):
            bad.append((u.word, v.word))
    return bad
