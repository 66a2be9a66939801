"""Plain-text and DOT formats for machines, context NFAs and suites.

Mealy file::

    mealy <states> <inputs> <outputs> <initial>
    s i -> t / o

NFA file::

    nfa <states> <symbols> <initial>
    s x -> t

Blank lines and ``#`` comments are ignored.  Suite files hold one maximal
test per line (space-separated symbols, ``-`` for the empty test),
optionally followed by a line ``= o1 o2 ...`` with the expected outputs.
"""

from __future__ import annotations

from .automata import ContextNfa, MealyMachine
from .suite import SuiteTree


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _ints(parts, no):
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(parts)!r}", no) from None


def parse_mealy(text: str) -> MealyMachine:
    lines = _content_lines(text)
    try:
        no, header = next(lines)
    except StopIteration:
        raise FormatError("empty machine file") from None
    parts = header.split()
    if len(parts) != 5 or parts[0] != "mealy":
        raise FormatError("header must read 'mealy <states> <inputs> <outputs> <initial>'", no)
    n, ni, no_, init = _ints(parts[1:], no)
    nxt = [[None] * ni for _ in range(n)]
    out = [[None] * ni for _ in range(n)]
    for no, line in lines:
        left, sep, right = line.partition("->")
        target, slash, o = right.partition("/")
        if not sep or not slash:
            raise FormatError("transition must read 's i -> t / o'", no)
        src = _ints(left.split(), no)
        dst = _ints(target.split() + o.split(), no)
        if len(src) != 2 or len(dst) != 2:
            raise FormatError("transition must read 's i -> t / o'", no)
        (s, i), (t, oo) = src, dst
        if not (0 <= s < n and 0 <= i < ni and 0 <= t < n and 0 <= oo < no_):
            raise FormatError("index out of range", no)
        if nxt[s][i] is not None:
            raise FormatError(f"duplicate transition for state {s}, input {i}", no)
        nxt[s][i], out[s][i] = t, oo
    for s in range(n):
        for i in range(ni):
            if nxt[s][i] is None:
                raise FormatError(f"state {s} has no transition on input {i}")
    try:
        return MealyMachine(ni, no_, nxt, out, init)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def parse_nfa(text: str) -> ContextNfa:
    lines = _content_lines(text)
    try:
        no, header = next(lines)
    except StopIteration:
        raise FormatError("empty NFA file") from None
    parts = header.split()
    if len(parts) != 4 or parts[0] != "nfa":
        raise FormatError("header must read 'nfa <states> <symbols> <initial>'", no)
    n, ns, init = _ints(parts[1:], no)
    delta = [[set() for _ in range(ns)] for _ in range(n)]
    for no, line in lines:
        left, sep, right = line.partition("->")
        src, dst = _ints(left.split(), no), _ints(right.split(), no)
        if not sep or len(src) != 2 or len(dst) != 1:
            raise FormatError("transition must read 's x -> t'", no)
        (s, x), (t,) = src, dst
        if not (0 <= s < n and 0 <= x < ns and 0 <= t < n):
            raise FormatError("index out of range", no)
        delta[s][x].add(t)
    try:
        return ContextNfa(ns, delta, init)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def dump_mealy(m: MealyMachine) -> str:
    lines = [f"mealy {m.n_states} {m.n_inputs} {m.n_outputs} {m.initial}"]
    for s in range(m.n_states):
        for i in range(m.n_inputs):
            lines.append(f"{s} {i} -> {m.next[s][i]} / {m.out[s][i]}")
    return "\n".join(lines) + "\n"


def dump_nfa(a: ContextNfa) -> str:
    lines = [f"nfa {a.n_states} {a.n_symbols} {a.initial}"]
    for s in range(a.n_states):
        for x in range(a.n_symbols):
            for t in sorted(a.delta[s][x]):
                lines.append(f"{s} {x} -> {t}")
    return "\n".join(lines) + "\n"


def mealy_to_dot(m: MealyMachine, name: str = "M") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];", f"  __start -> s{m.initial};"]
    for s in range(m.n_states):
        lines.append(f"  s{s} [shape=circle];")
    for s in range(m.n_states):
        for i in range(m.n_inputs):
            lines.append(f'  s{s} -> s{m.next[s][i]} [label="{i}/{m.out[s][i]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def nfa_to_dot(a: ContextNfa, name: str = "A") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];", f"  __start -> q{a.initial};"]
    for s in range(a.n_states):
        lines.append(f"  q{s} [shape=doublecircle];")
    for s in range(a.n_states):
        for x in range(a.n_symbols):
            for t in sorted(a.delta[s][x]):
                lines.append(f'  q{s} -> q{t} [label="{x}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _word_str(w) -> str:
    return " ".join(map(str, w)) if w else "-"


def dump_suite(suite: SuiteTree, *, outputs: bool = False) -> str:
    lines = []
    for w in suite.maximal_tests():
        lines.append(_word_str(w))
        if outputs:
            lines.append("= " + _word_str(suite.machine.output(w)))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_suite(text: str) -> list:
    """Return ``[(word, expected outputs or None)]`` in file order."""
    tests = []
    for no, line in _content_lines(text):
        if line.startswith("="):
            if not tests or tests[-1][1] is not None:
                raise FormatError("expected-output line without a preceding test", no)
            body = line[1:].strip()
            outs = () if body == "-" else tuple(_ints(body.split(), no))
            if len(outs) != len(tests[-1][0]):
                raise FormatError("expected outputs do not match the test length", no)
            tests[-1] = (tests[-1][0], outs)
        else:
            word = () if line == "-" else tuple(_ints(line.split(), no))
            tests.append((word, None))
    return tests


def load_suite(text: str, machine: MealyMachine, context: ContextNfa) -> SuiteTree:
    suite = SuiteTree(machine, context)
    for word, _ in parse_suite(text):
        suite.add(word)
    return suite
