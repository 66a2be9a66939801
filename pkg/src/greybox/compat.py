"""Compatibility of locations, shortest separating words, and simulation preorders."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .automata import ContextNfa, MealyMachine, Word, _check_alphabets, product_bfs, universal_nfa


@dataclass
class CompatTable:
    """The relations s ~_a t for every context state a, with shortest witnesses.

    ``split[a, s, t]`` is the length of the shortest word in L_A(a) on which
    s and t produce different outputs, or 0 when no such word exists.
    """

    machine: MealyMachine
    context: ContextNfa
    split: np.ndarray
    n_rounds: int
    _witness: dict = field(default_factory=dict, repr=False)

    def compatible(self, s: int, t: int, a: int) -> bool:
        return self.split[a, s, t] == 0

    def incompatible(self, s: int, t: int, a: int) -> bool:
        return self.split[a, s, t] != 0

    def witness(self, s: int, t: int, a: int) -> Word:
        """Lexicographically least among the shortest separating words; ``()`` if compatible."""
        if s > t:
            s, t = t, s
        key = (s, t, a)
        w = self._witness.get(key)
        if w is None:
            w = self._reconstruct(s, t, a)
            self._witness[key] = w
        return w

    def _reconstruct(self, s: int, t: int, a: int) -> Word:
        r = int(self.split[a, s, t])
        if r == 0:
            return ()
        m, ctx = self.machine, self.context
        for i in range(m.n_inputs):
            succ = ctx.delta[a][i]
            if not succ:
                continue
            if r == 1:
                if m.out[s][i] != m.out[t][i]:
                    return (i,)
                continue
            s2, t2 = m.next[s][i], m.next[t][i]
            best = None
            for b in sorted(succ):
                if self.split[b, s2, t2] == r - 1:
                    cand = self.witness(s2, t2, b)
                    if best is None or cand < best:
                        best = cand
            if best is not None:
                return (i,) + best
        raise AssertionError(f"inconsistent split table at {(s, t, a)}")

    def partition(self, a: int) -> list:
        """Blocks of ~_a, each sorted, ordered by smallest member."""
        n = self.machine.n_states
        seen = [False] * n
        blocks = []
        for s in range(n):
            if seen[s]:
                continue
            block = [t for t in range(s, n) if not seen[t] and self.split[a, s, t] == 0]
            for t in block:
                seen[t] = True
            blocks.append(block)
        return blocks

    def partition_at_round(self, a: int, j: int) -> list:
        """Blocks of the bounded relation ~_a^j (separating words of length <= j)."""
        n = self.machine.n_states
        sep = (self.split[a] > 0) & (self.split[a] <= j)
        seen = [False] * n
        blocks = []
        for s in range(n):
            if seen[s]:
                continue
            block = [t for t in range(s, n) if not seen[t] and not sep[s, t]]
            for t in block:
                seen[t] = True
            blocks.append(block)
        return blocks

    @cached_property
    def cross(self) -> np.ndarray:
        """Exact cross-state table ``cross[a, b, s, t]``: shortest word in L_A(a) ∩ L_A(b) separating s and t."""
        return _cross_split(self.machine, self.context)

    def locations_incompatible(self, loc1: tuple, loc2: tuple) -> bool:
        (s, a), (t, b) = loc1, loc2
        if a == b:
            return self.split[a, s, t] != 0
        return self.cross[a, b, s, t] != 0

    def dump(self) -> str:
        lines = []
        for a in range(self.context.n_states):
            blocks = " ".join("{" + ",".join(map(str, b)) + "}" for b in self.partition(a))
            lines.append(f"~{a}: {blocks}")
        return "\n".join(lines)


def _out_diff(m: MealyMachine) -> np.ndarray:
    o = m.out_array
    return o[:, None, :] != o[None, :, :]  # [s, t, i]


def compute_compat(m: MealyMachine, a: ContextNfa) -> CompatTable:
    """Iterate the bounded relations ~_a^j to their common fixed point.

    Round j+1 separates s, t at a when some enabled input already yields
    different outputs, or leads to a successor pair that was separated at
    some b in delta(a, i) by round j.
    """
    _check_alphabets(m, a)
    n, na, ni = m.n_states, a.n_states, m.n_inputs
    nxt = m.next_array
    diff = _out_diff(m)
    adj = a.adjacency.astype(np.int64)
    enabled = adj.any(axis=2)  # [i, a]
    base = np.zeros((na, n, n), dtype=bool)
    for i in range(ni):
        base |= enabled[i][:, None, None] & diff[None, :, :, i]
    sep = np.zeros((na, n, n), dtype=bool)
    split = np.zeros((na, n, n), dtype=np.int64)
    j = 0
    while True:
        j += 1
        new = base.copy()
        if j > 1:
            new |= sep
            for i in range(ni):
                perm = nxt[:, i]
                moved = sep[:, perm][:, :, perm].reshape(na, n * n).astype(np.int64)
                new |= (adj[i] @ moved).reshape(na, n, n) > 0
        fresh = new & ~sep
        if not fresh.any():
            break
        split[fresh] = j
        sep = new
    return CompatTable(m, a, split, j - 1)


def _cross_split(m: MealyMachine, a: ContextNfa) -> np.ndarray:
    n, na, ni = m.n_states, a.n_states, m.n_inputs
    nxt = m.next_array
    diff = _out_diff(m)
    adj = a.adjacency.astype(np.int64)
    enabled = adj.any(axis=2)
    both = [enabled[i][:, None] & enabled[i][None, :] for i in range(ni)]
    base = np.zeros((na, na, n, n), dtype=bool)
    for i in range(ni):
        base |= both[i][:, :, None, None] & diff[None, None, :, :, i]
    sep = np.zeros_like(base)
    split = np.zeros(base.shape, dtype=np.int64)
    j = 0
    while True:
        j += 1
        new = base | sep
        if j > 1:
            for i in range(ni):
                perm = nxt[:, i]
                moved = sep[:, :, perm][:, :, :, perm].astype(np.int64)
                reach = np.einsum("ac,bd,cdst->abst", adj[i], adj[i], moved, optimize=True) > 0
                new |= reach
        fresh = new & ~sep
        if not fresh.any():
            break
        split[fresh] = j
        sep = new
    return split


def distinguishing_sequence(table: CompatTable, s: int, t: int, a: int) -> Word:
    return table.witness(s, t, a)


@dataclass(frozen=True)
class Preorder:
    """Reflexive, transitive relation over context states; ``leq[a, b]`` reads a ⊑ b."""

    leq: np.ndarray

    def __call__(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    @property
    def n_states(self) -> int:
        return self.leq.shape[0]

    def is_trivial(self) -> bool:
        """True when only the identity pairs are related."""
        return not (self.leq & ~np.eye(self.n_states, dtype=bool)).any()

    def strict_pairs(self) -> list:
        n = self.n_states
        return [(a, b) for a in range(n) for b in range(n) if a != b and self.leq[a, b]]

    @classmethod
    def identity(cls, n: int) -> "Preorder":
        return cls(np.eye(n, dtype=bool))


def direct_simulation(a: ContextNfa) -> Preorder:
    """Greatest direct simulation: a ⊑ b iff every move of a is matched by b into a related pair."""
    n = a.n_states
    adj = a.adjacency.astype(np.int64)
    rel = np.ones((n, n), dtype=bool)
    while True:
        new = rel.copy()
        for x in range(a.n_symbols):
            # matched[a2, b] <=> some successor b2 of b on x has a2 ⊑ b2
            matched = (rel.astype(np.int64) @ adj[x].T) > 0
            unmatched = (adj[x] @ (~matched).astype(np.int64)) > 0
            new &= ~unmatched
        if (new == rel).all():
            return Preorder(rel)
        rel = new


def quotient_by_simulation(a: ContextNfa, rel: Preorder) -> tuple[ContextNfa, list]:
    """Merge states that simulate each other.

    Returns the quotient NFA and the class index of every original state.
    Classes are numbered by their smallest member.
    """
    n = a.n_states
    eq = rel.leq & rel.leq.T
    cls = [-1] * n
    k = 0
    for s in range(n):
        if cls[s] < 0:
            for t in range(s, n):
                if cls[t] < 0 and eq[s, t]:
                    cls[t] = k
            k += 1
    delta = [[set() for _ in range(a.n_symbols)] for _ in range(k)]
    for s in range(n):
        for x in range(a.n_symbols):
            delta[cls[s]][x].update(cls[b] for b in a.delta[s][x])
    quotient = ContextNfa(a.n_symbols, tuple(tuple(frozenset(c) for c in row) for row in delta), cls[a.initial])
    return quotient, cls


def harmonized_identifiers(m: MealyMachine, a: ContextNfa, table: CompatTable, locations=None) -> dict:
    """Per-location word sets whose pairwise intersections separate every incompatible pair.

    By default only reachable locations are considered; the same stored
    witness serves both (s, a) and (t, a), which is what makes the family
    harmonized.
    """
    if locations is None:
        locations = product_bfs(m, a)[0]
    by_state: dict = {}
    for s, q in locations:
        by_state.setdefault(q, []).append(s)
    family = {}
    for q, states in by_state.items():
        for s in states:
            words = {table.witness(s, t, q) for t in states if t != s and table.incompatible(s, t, q)}
            family[(s, q)] = tuple(sorted(words, key=lambda w: (len(w), w)))
    return family


def is_reduced(m: MealyMachine) -> bool:
    """Every pair of distinct states is separated by some input word."""
    table = compute_compat(m, universal_nfa(m.n_inputs))
    n = m.n_states
    return all(table.split[0, s, t] for s in range(n) for t in range(s + 1, n))


def minimize(m: MealyMachine) -> tuple[MealyMachine, list]:
    """Quotient of the reachable part of ``m`` by state equivalence.

    Returns the reduced machine and, per original state, its class index
    (``-1`` for unreachable states).  Classes are numbered in BFS order.
    """
    table = compute_compat(m, universal_nfa(m.n_inputs))
    order, _ = product_bfs(m, universal_nfa(m.n_inputs))
    cls = [-1] * m.n_states
    reps = []
    for s, _q in order:
        for k, r in enumerate(reps):
            if table.split[0, s, r] == 0:
                cls[s] = k
                break
        else:
            cls[s] = len(reps)
            reps.append(s)
    nxt = [[cls[m.next[r][i]] for i in range(m.n_inputs)] for r in reps]
    out = [[m.out[r][i] for i in range(m.n_inputs)] for r in reps]
    return MealyMachine(m.n_inputs, m.n_outputs, nxt, out, cls[m.initial]), cls
