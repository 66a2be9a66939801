"""Cores of the location space and the breadth-first covers that reach them."""

from __future__ import annotations

from dataclasses import dataclass

from .automata import ContextNfa, MealyMachine, Word, product_bfs
from .compat import CompatTable, Preorder


@dataclass(frozen=True)
class Cover:
    """Prefix-closed, well-founded set of access words."""

    words: frozenset

    def __post_init__(self):
        if () not in self.words:
            raise ValueError("a cover must contain the empty word")
        for w in self.words:
            if w[:-1] not in self.words:
                raise ValueError(f"cover is not prefix-closed at {w}")

    def __contains__(self, word) -> bool:
        return tuple(word) in self.words

    def __len__(self) -> int:
        return len(self.words)

    def ordered(self) -> list:
        """Words by length, then lexicographically (the order exploration starts from)."""
        return sorted(self.words, key=lambda w: (len(w), w))


def weak_core(m: MealyMachine, a: ContextNfa, table: CompatTable) -> list:
    """One representative per class of equivalent locations, earliest BFS discovery first."""
    order, _ = product_bfs(m, a)
    reps: dict = {}
    core = []
    for s, q in order:
        known = reps.setdefault(q, [])
        if any(table.compatible(s, t, q) for t in known):
            continue
        known.append(s)
        core.append((s, q))
    return core


def dominates(table: CompatTable, pre: Preorder, big: tuple, small: tuple) -> bool:
    """(t, b) ⊒ (s, a): b ⊒ a and the two are compatible.

    With L_A(a) ⊆ L_A(b) compatibility reduces to s ~_a t.
    """
    (t, b), (s, a) = big, small
    return bool(pre.leq[a, b]) and table.compatible(s, t, a)


def reduce_core(core: list, table: CompatTable, pre: Preorder) -> list:
    """Greedily drop core locations dominated by another surviving one.

    Domination is transitive, so anything the dropped location dominated
    stays dominated by its dominator.
    """
    alive = list(core)
    for q in core:
        if any(r != q and dominates(table, pre, r, q) for r in alive):
            alive.remove(q)
    return alive


def cover(m: MealyMachine, a: ContextNfa, core: list) -> tuple[Cover, dict]:
    """Shortest BFS access words for the core, closed under prefixes."""
    _, access = product_bfs(m, a)
    to_cvr = {}
    for loc in core:
        if loc not in access:
            raise RuntimeError(f"core location {loc} is not reachable")
        to_cvr[loc] = access[loc]
    words = {()}
    for w in to_cvr.values():
        for j in range(len(w) + 1):
            words.add(w[:j])
    return Cover(frozenset(words)), to_cvr


def is_core(table: CompatTable, pre: Preorder, core: list, locations) -> bool:
    return all(any(dominates(table, pre, q, loc) for q in core) for loc in locations)


def v_norm(v: Cover, word: Word) -> int:
    """Length of the shortest suffix left after stripping a prefix that lies in V."""
    word = tuple(word)
    for j in range(len(word), -1, -1):
        if word[:j] in v.words:
            return len(word) - j
    raise AssertionError("unreachable: the empty word is always in a cover")


def v_leq(v: Cover, beta: Word, alpha: Word) -> bool:
    """beta ≤_V alpha: beta is a prefix of alpha and no V-word sits strictly between them."""
    beta, alpha = tuple(beta), tuple(alpha)
    if alpha[: len(beta)] != beta:
        return False
    return not any(alpha[:j] in v.words for j in range(len(beta) + 1, len(alpha)))
