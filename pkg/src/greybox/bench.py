"""Random instance generation and the CSV experiment harness."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .automata import ContextNfa, MealyMachine, image_automaton
from .compat import direct_simulation, is_reduced, quotient_by_simulation
from .testgen import GenerationTimeout, SuiteTooLarge, baseline_tail, complex, simple

MAX_REJECTIONS = 10_000
COLUMNS = ("seed", "algo", "nH", "nT", "nM", "nA", "k", "e", "tests", "symbols", "millis", "status")
ALGORITHMS = ("simple", "complex", "advanced", "baseline")
DEFAULT_TIMEOUT = 180.0
BASELINE_LIMIT = 2_000_000


class ConfigurationError(ValueError):
    pass


def rng_for(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; the same seed gives the same draws on every platform."""
    return np.random.Generator(np.random.Philox(seed))


def _all_reachable(m: MealyMachine) -> bool:
    seen = {m.initial}
    stack = [m.initial]
    while stack:
        s = stack.pop()
        for t in m.next[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return len(seen) == m.n_states


def gen_random_reduced(states: int, inputs: int, outputs: int, seed: int) -> MealyMachine:
    """Uniform draw conditioned on every state being reachable and all states pairwise distinguishable."""
    if states < 1 or inputs < 1 or outputs < 1:
        raise ConfigurationError("sizes must be positive")
    if states > 1 and outputs < 2:
        raise ConfigurationError("a reduced machine with several states needs at least two outputs")
    rng = rng_for(seed)
    for _ in range(MAX_REJECTIONS):
        nxt = rng.integers(states, size=(states, inputs)).tolist()
        out = rng.integers(outputs, size=(states, inputs)).tolist()
        m = MealyMachine(inputs, outputs, nxt, out, 0)
        if _all_reachable(m) and is_reduced(m):
            return m
    raise ConfigurationError(f"no reduced connected machine with {states} states after {MAX_REJECTIONS} draws")


def random_nfa(states: int, symbols: int, seed: int, density: float = 0.35) -> ContextNfa:
    """Random all-accepting NFA in which every state is reachable from the initial one."""
    rng = rng_for(seed)
    for _ in range(MAX_REJECTIONS):
        adj = rng.random((states, symbols, states)) < density
        delta = [[frozenset(np.flatnonzero(adj[s, x]).tolist()) for x in range(symbols)] for s in range(states)]
        a = ContextNfa(symbols, delta, 0)
        if _nfa_reachable(a):
            return a
    raise ConfigurationError("could not draw a connected NFA")


def _nfa_reachable(a: ContextNfa) -> bool:
    seen = {a.initial}
    stack = [a.initial]
    while stack:
        s = stack.pop()
        for succ in a.delta[s]:
            for t in succ - seen:
                seen.add(t)
                stack.append(t)
    return len(seen) == a.n_states


def check_generated(m: MealyMachine) -> bool:
    """Independent re-check of the generator's postconditions via partition refinement."""
    n = m.n_states
    block = [0] * n
    while True:
        sig = [(block[s],) + tuple(m.out[s]) + tuple(block[t] for t in m.next[s]) for s in range(n)]
        ids = {}
        new = [ids.setdefault(x, len(ids)) for x in sig]
        if len(set(new)) == len(set(block)):
            break
        block = new
    return len(set(block)) == n and _all_reachable(m)


@dataclass
class BenchmarkConfig:
    head_states: int = 5
    tail_states: int = 2
    head_inputs: int = 6
    shared_alphabet: int = 3
    tail_outputs: int = 3
    extra_states: int = 0
    seed: int = 0
    count: int = 10
    timeout: float = DEFAULT_TIMEOUT
    baseline_limit: int = BASELINE_LIMIT

    def __post_init__(self):
        for name in ("head_states", "tail_states", "head_inputs", "shared_alphabet", "tail_outputs"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.extra_states < 0 or self.count < 0:
            raise ConfigurationError("extra_states and count must be non-negative")

    @property
    def k(self) -> int:
        return self.tail_states + self.extra_states


def instance(cfg: BenchmarkConfig, index: int) -> tuple[int, MealyMachine, MealyMachine]:
    seed = (cfg.seed * 1_000_003 + index) % 2**64
    h = gen_random_reduced(cfg.head_states, cfg.head_inputs, cfg.shared_alphabet, seed)
    t = gen_random_reduced(cfg.tail_states, cfg.shared_alphabet, cfg.tail_outputs, seed ^ 0x9E3779B97F4A7C15)
    return seed, h, t


def advanced(t: MealyMachine, a: ContextNfa, k: int, timeout: float | None = None):
    """Quotient the context by simulation equivalence, then run complex if the preorder is nontrivial."""
    rel = direct_simulation(a)
    q, _ = quotient_by_simulation(a, rel)
    pre = direct_simulation(q)
    if pre.is_trivial():
        return simple(t, q, k, timeout=timeout), q
    return complex(t, q, pre, k, timeout=timeout), q


def run_one(cfg: BenchmarkConfig, index: int, algo: str) -> dict:
    seed, h, t = instance(cfg, index)
    a = image_automaton(h)
    k = cfg.k
    row = {"seed": seed, "algo": algo, "nH": h.n_states, "nT": t.n_states, "nM": t.n_states, "nA": a.n_states, "k": k}
    started = time.perf_counter()
    try:
        if algo == "simple":
            suite = simple(t, a, k, timeout=cfg.timeout)
        elif algo == "complex":
            suite = complex(t, a, direct_simulation(a), k, timeout=cfg.timeout)
        elif algo == "advanced":
            suite, q = advanced(t, a, k, timeout=cfg.timeout)
            row["nA"] = q.n_states
        elif algo == "baseline":
            suite = baseline_tail(h, t, k, limit=cfg.baseline_limit)
        else:
            raise ConfigurationError(f"unknown algorithm {algo!r}")
    except GenerationTimeout:
        row.update(e="", tests="", symbols="", status="timeout")
    except SuiteTooLarge:
        row.update(e="", tests="", symbols="", status="oom-guard")
    else:
        info = suite.info
        row.update(e=info.get("e_P", info.get("e")), tests=suite.n_tests(), symbols=suite.n_symbols(), status="ok")
    row["millis"] = int(round((time.perf_counter() - started) * 1000))
    return row


def _run_task(args):
    return run_one(*args)


def _workers() -> int:
    cap = os.environ.get("GREYBOX_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def run_experiment(cfg: BenchmarkConfig, algorithms, *, timing: bool = True, workers: int | None = None) -> list:
    """Rows for every instance and algorithm, in instance order."""
    for algo in algorithms:
        if algo not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {algo!r}")
    tasks = [(cfg, idx, algo) for idx in range(cfg.count) for algo in algorithms]
    workers = _workers() if workers is None else workers
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_task, tasks))
    else:
        rows = [run_one(*task) for task in tasks]
    if not timing:
        for row in rows:
            row["millis"] = 0
    return rows


def summarize(rows, algorithms) -> list:
    """Median and quartiles of symbols and millis per algorithm over the finished runs."""
    lines = []
    for algo in algorithms:
        done = [r for r in rows if r["algo"] == algo and r["status"] == "ok"]
        if not done:
            lines.append(f"# {algo}: no finished runs")
            continue
        for key in ("symbols", "millis"):
            p25, med, p75 = np.percentile([r[key] for r in done], [25, 50, 75])
            lines.append(f"# {algo} {key}: median={med:g} p25={p25:g} p75={p75:g} n={len(done)}")
    return lines


def to_csv(rows, algorithms) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if rows:
        buf.write("\n".join(summarize(rows, algorithms)) + "\n")
    return buf.getvalue()

