"""Mealy machines, all-accepting NFAs and the constructions that relate them.

States and symbols are dense integer indices.  Words are tuples of ints.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Word = tuple  # tuple[int, ...]
Location = tuple  # (mstate, astate)


class AlphabetError(ValueError):
    """A word or machine uses symbols outside the expected alphabet."""


@dataclass(frozen=True)
class MealyMachine:
    """Deterministic, input-complete Mealy machine.

    ``next[s][i]`` is the successor of state ``s`` under input ``i`` and
    ``out[s][i]`` the emitted output symbol.
    """

    n_inputs: int
    n_outputs: int
    next: tuple
    out: tuple
    initial: int = 0
    input_names: tuple | None = field(default=None, compare=False)
    output_names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "next", tuple(tuple(int(t) for t in row) for row in self.next))
        object.__setattr__(self, "out", tuple(tuple(int(o) for o in row) for row in self.out))
        n = len(self.next)
        if n == 0:
            raise ValueError("a Mealy machine needs at least one state")
        if len(self.out) != n:
            raise ValueError("next and out tables disagree on the number of states")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for s in range(n):
            if len(self.next[s]) != self.n_inputs or len(self.out[s]) != self.n_inputs:
                raise ValueError(f"state {s} is not input-complete")
            for i in range(self.n_inputs):
                if not 0 <= self.next[s][i] < n:
                    raise ValueError(f"transition ({s}, {i}) leaves the state set")
                if not 0 <= self.out[s][i] < self.n_outputs:
                    raise AlphabetError(f"output of ({s}, {i}) outside the output alphabet")

    @property
    def n_states(self) -> int:
        return len(self.next)

    @cached_property
    def next_array(self) -> np.ndarray:
        return np.array(self.next, dtype=np.intp).reshape(self.n_states, self.n_inputs)

    @cached_property
    def out_array(self) -> np.ndarray:
        return np.array(self.out, dtype=np.intp).reshape(self.n_states, self.n_inputs)

    def run(self, word: Iterable[int], start: int | None = None) -> tuple[int, Word]:
        return mealy_run(self, self.initial if start is None else start, word)

    def state_after(self, word: Iterable[int], start: int | None = None) -> int:
        s = self.initial if start is None else start
        nxt = self.next
        for i in word:
            s = nxt[s][i]
        return s

    def output(self, word: Iterable[int], start: int | None = None) -> Word:
        return mealy_run(self, self.initial if start is None else start, word)[1]


@dataclass(frozen=True)
class ContextNfa:
    """NFA in which every state is accepting.

    ``delta[a][x]`` is the frozenset of successors of ``a`` on ``x``.  The
    language of every state is therefore prefix-closed.
    """

    n_symbols: int
    delta: tuple
    initial: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "delta", tuple(tuple(frozenset(int(b) for b in row[x]) for x in range(len(row))) for row in self.delta)
        )
        n = len(self.delta)
        if n == 0:
            raise ValueError("an NFA needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for a, row in enumerate(self.delta):
            if len(row) != self.n_symbols:
                raise ValueError(f"state {a} has {len(row)} symbol rows, expected {self.n_symbols}")
            for succ in row:
                if any(not 0 <= b < n for b in succ):
                    raise ValueError(f"transition from {a} leaves the state set")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @cached_property
    def succ_mask(self) -> tuple:
        """``succ_mask[a][x]``: successor set as an int bitmask."""
        return tuple(tuple(_to_mask(self.delta[a][x]) for x in range(self.n_symbols)) for a in range(self.n_states))

    @cached_property
    def pred_mask(self) -> tuple:
        """Reversed transitions: ``pred_mask[b][x]`` holds every ``a`` with ``b`` in delta(a, x)."""
        pred = [[0] * self.n_symbols for _ in range(self.n_states)]
        for a in range(self.n_states):
            for x in range(self.n_symbols):
                for b in self.delta[a][x]:
                    pred[b][x] |= 1 << a
        return tuple(tuple(row) for row in pred)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Boolean tensor ``adj[x, a, b]``."""
        adj = np.zeros((self.n_symbols, self.n_states, self.n_states), dtype=bool)
        for a in range(self.n_states):
            for x in range(self.n_symbols):
                for b in self.delta[a][x]:
                    adj[x, a, b] = True
        return adj

    @cached_property
    def _step_cache(self) -> dict:
        return {}

    def step_mask(self, mask: int, x: int) -> int:
        key = (mask, x)
        cache = self._step_cache
        res = cache.get(key)
        if res is None:
            res = 0
            sm = self.succ_mask
            m, a = mask, 0
            while m:
                if m & 1:
                    res |= sm[a][x]
                m >>= 1
                a += 1
            cache[key] = res
        return res

    @cached_property
    def _pre_cache(self) -> dict:
        return {}

    def pre_mask(self, mask: int, x: int) -> int:
        key = (mask, x)
        cache = self._pre_cache
        res = cache.get(key)
        if res is None:
            res = 0
            pm = self.pred_mask
            m, b = mask, 0
            while m:
                if m & 1:
                    res |= pm[b][x]
                m >>= 1
                b += 1
            cache[key] = res
        return res

    def enabled(self, a: int, x: int) -> bool:
        return bool(self.delta[a][x])


def _to_mask(states: Iterable[int]) -> int:
    m = 0
    for s in states:
        m |= 1 << s
    return m


def mask_to_set(mask: int) -> frozenset:
    out = []
    a = 0
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return frozenset(out)


def mask_states(mask: int) -> list:
    out = []
    a = 0
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return out


def _check_word(word: Sequence[int], size: int, what: str) -> None:
    for pos, x in enumerate(word):
        if not 0 <= x < size:
            raise AlphabetError(f"symbol {x!r} at position {pos} is outside the {what} alphabet of size {size}")


def mealy_run(m: MealyMachine, start: int, word: Iterable[int]) -> tuple[int, Word]:
    """Return ``(delta_M(start, word), lambda_M(start, word))``."""
    word = tuple(word)
    _check_word(word, m.n_inputs, "input")
    if not 0 <= start < m.n_states:
        raise ValueError(f"state {start} out of range")
    s = start
    outs = []
    nxt, out = m.next, m.out
    for i in word:
        outs.append(out[s][i])
        s = nxt[s][i]
    return s, tuple(outs)


def nfa_step(a: ContextNfa, from_set: Iterable[int], word: Iterable[int]) -> frozenset:
    word = tuple(word)
    _check_word(word, a.n_symbols, "NFA")
    mask = _to_mask(from_set)
    for x in word:
        if not mask:
            break
        mask = a.step_mask(mask, x)
    return mask_to_set(mask)


def nfa_accepts(a: ContextNfa, word: Iterable[int], start: int | None = None) -> bool:
    return bool(nfa_step(a, {a.initial if start is None else start}, word))


def nfa_mask_after(a: ContextNfa, word: Iterable[int], start_mask: int | None = None) -> int:
    mask = (1 << a.initial) if start_mask is None else start_mask
    for x in word:
        if not mask:
            return 0
        mask = a.step_mask(mask, x)
    return mask


def universal_nfa(n_symbols: int) -> ContextNfa:
    """One state with a self-loop on every symbol."""
    return ContextNfa(n_symbols, ((frozenset({0}),) * n_symbols,), 0)


def image_automaton(h: MealyMachine) -> ContextNfa:
    """NFA over H's outputs accepting exactly Out(H): drop the input labels."""
    delta = [[set() for _ in range(h.n_outputs)] for _ in range(h.n_states)]
    for s in range(h.n_states):
        for i in range(h.n_inputs):
            delta[s][h.out[s][i]].add(h.next[s][i])
    return ContextNfa(h.n_outputs, tuple(tuple(frozenset(c) for c in row) for row in delta), h.initial)


def composite_product(h: MealyMachine, t: MealyMachine) -> tuple[MealyMachine, list]:
    """Cascade T∘H as a single Mealy machine over the reachable state pairs.

    Output ``(o_h, o_t)`` is encoded as ``o_h * |O_T| + o_t``.  Returns the
    machine and the list of ``(h_state, t_state)`` pairs indexed by product
    state.
    """
    if t.n_inputs != h.n_outputs:
        raise AlphabetError(f"tail expects {t.n_inputs} inputs but head produces {h.n_outputs} outputs")
    start = (h.initial, t.initial)
    index = {start: 0}
    pairs = [start]
    nxt, out = [], []
    k = 0
    while k < len(pairs):
        hs, ts = pairs[k]
        row_n, row_o = [], []
        for i in range(h.n_inputs):
            o = h.out[hs][i]
            succ = (h.next[hs][i], t.next[ts][o])
            if succ not in index:
                index[succ] = len(pairs)
                pairs.append(succ)
            row_n.append(index[succ])
            row_o.append(o * t.n_outputs + t.out[ts][o])
        nxt.append(row_n)
        out.append(row_o)
        k += 1
    return MealyMachine(h.n_inputs, h.n_outputs * t.n_outputs, nxt, out, 0), pairs


def split_paired_output(o: int, n_tail_outputs: int) -> tuple[int, int]:
    return divmod(o, n_tail_outputs)


def _check_alphabets(m: MealyMachine, a: ContextNfa) -> None:
    if a.n_symbols != m.n_inputs:
        raise AlphabetError(f"context alphabet has {a.n_symbols} symbols but the machine has {m.n_inputs} inputs")


def product_bfs(m: MealyMachine, a: ContextNfa) -> tuple[list, dict]:
    """BFS over locations from ``(r_M, r_A)``, inputs and successors in index order.

    Returns ``(order, access)``: locations in discovery order and the access
    word of each (the first BFS word reaching it, hence a shortest one).
    """
    _check_alphabets(m, a)
    start = (m.initial, a.initial)
    access = {start: ()}
    order = [start]
    queue = deque([start])
    while queue:
        s, q = queue.popleft()
        w = access[(s, q)]
        for i in range(m.n_inputs):
            succ_a = a.delta[q][i]
            if not succ_a:
                continue
            t = m.next[s][i]
            for b in sorted(succ_a):
                loc = (t, b)
                if loc not in access:
                    access[loc] = w + (i,)
                    order.append(loc)
                    queue.append(loc)
    return order, access


def reachable_product_locations(m: MealyMachine, a: ContextNfa) -> set:
    return set(product_bfs(m, a)[0])


def reachable_states(m: MealyMachine) -> set:
    seen = {m.initial}
    stack = [m.initial]
    while stack:
        s = stack.pop()
        for t in m.next[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen
