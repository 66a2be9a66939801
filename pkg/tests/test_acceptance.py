"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line shown in the run summary."""

import statistics
from collections import deque

import pytest

from greybox.automata import MealyMachine, composite_product, image_automaton, nfa_accepts, universal_nfa
from greybox.bench import BenchmarkConfig, instance, random_nfa, rng_for
from greybox.compat import compute_compat, direct_simulation, minimize
from greybox.oracle import (
    MutantSpec,
    completeness_check,
    enumerate_machines,
    separation_violations,
    mutant_kill_rate,
    suite_passes,
)
from greybox.testgen import SuiteTooLarge, baseline_tail, complex, simple

from conftest import ACCEPTANCE_LINES


def report(number, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def small_instance(seed):
    """|S_M|, |S_A| <= 3 over two inputs and outputs; contexts alternate between random NFAs and head images."""
    r = rng_for(10_000 + seed)
    n = int(r.integers(1, 4))
    m = MealyMachine(2, 2, r.integers(n, size=(n, 2)).tolist(), r.integers(2, size=(n, 2)).tolist(), 0)
    if seed % 2:
        nh = int(r.integers(1, 4))
        h = MealyMachine(2, 2, r.integers(nh, size=(nh, 2)).tolist(), r.integers(2, size=(nh, 2)).tolist(), 0)
        a = image_automaton(h)
    else:
        a = random_nfa(int(r.integers(1, 4)), 2, seed, density=float(r.uniform(0.25, 0.6)))
    return m, a


def medium_instance(seed):
    r = rng_for(20_000 + seed)
    n, na, ni = int(r.integers(1, 7)), int(r.integers(1, 6)), int(r.integers(2, 4))
    m = MealyMachine(ni, 2, r.integers(n, size=(n, ni)).tolist(), r.integers(2, size=(n, ni)).tolist(), 0)
    a = random_nfa(na, ni, seed, density=float(r.uniform(0.2, 0.5)))
    return m, a


@pytest.fixture(scope="module")
def small_pool():
    """120 machine/context pairs, each with k = |S_M| and |S_M| + 1: 240 instances, suites built in debug mode.

    Debug mode checks every certificate at emission and incompatibility
    preservation after every exploit step, raising on any violation.
    """
    pool = []
    for seed in range(120):
        m, a = small_instance(seed)
        pre = direct_simulation(a)
        for k in (m.n_states, m.n_states + 1):
            pool.append(
                dict(m=m, a=a, k=k, simple=simple(m, a, k, debug=True), complex=complex(m, a, pre, k, debug=True))
            )
    return pool


def test_criterion_1_completeness(small_pool):
    failures = []
    for idx, inst in enumerate(small_pool):
        for algo in ("simple", "complex"):
            verdict = completeness_check(inst["m"], inst["a"], inst[algo], inst["k"])
            inst[algo + "_complete"] = verdict.complete
            if not verdict.complete:
                failures.append((idx, algo, verdict.witness))
    report(1, not failures and len(small_pool) >= 200, f"{len(small_pool)} instances x 2 algorithms, failures={failures[:3]}")


def _contained(a, small, big):
    """L_A(small) ⊆ L_A(big), by exploring all pairs (state, subset) reachable from (small, {big})."""
    start = (small, 1 << big)
    seen = {start}
    queue = deque([start])
    while queue:
        q, mask = queue.popleft()
        for x in range(a.n_symbols):
            for q2 in a.delta[q][x]:
                nxt = a.step_mask(mask, x)
                if not nxt:
                    return False
                if (q2, nxt) not in seen:
                    seen.add((q2, nxt))
                    queue.append((q2, nxt))
    return True


def _shortest_separation(m, a, q, s, t):
    start = (s, t, q)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x, y, p = node = queue.popleft()
        for i in range(m.n_inputs):
            if not a.delta[p][i]:
                continue
            if m.out[x][i] != m.out[y][i]:
                return dist[node] + 1
            for p2 in a.delta[p][i]:
                nxt = (m.next[x][i], m.next[y][i], p2)
                if nxt not in dist:
                    dist[nxt] = dist[node] + 1
                    queue.append(nxt)
    return 0


def test_criterion_2_witness_length(small_pool):
    checked, violations = 0, []
    seen = set()
    for inst in small_pool:
        m, a = inst["m"], inst["a"]
        if id(m) in seen:
            continue
        seen.add(id(m))
        table = compute_compat(m, a)
        for big in range(a.n_states):
            for small in range(a.n_states):
                if not _contained(a, small, big):
                    continue
                for s in range(m.n_states):
                    for t in range(m.n_states):
                        length = _shortest_separation(m, a, small, s, t)
                        assert length == table.split[small, s, t]
                        if length:
                            checked += 1
                            if length > m.n_states * a.n_states:
                                violations.append((s, t, small, length))
    report(2, not violations, f"{checked} incompatible pairs under verified containment, violations={len(violations)}")


def test_criterion_3_depth_bound():
    checked, violations = 0, []
    for seed in range(520):
        m, a = medium_instance(seed)
        ks = (m.n_states, m.n_states + 1) if m.n_states <= 3 else (m.n_states,)
        for k in ks:
            for suite in (simple(m, a, k), complex(m, a, direct_simulation(a), k)):
                checked += 1
                info = suite.info
                if max(info["depth_by_root"].values(), default=0) > info["e"] + 1:
                    violations.append((seed, k, info["algorithm"], info["max_depth"], info["e"]))
    report(3, not violations and checked >= 500, f"{checked} generations up to 6x5, violations={violations[:3]}")


def test_criterion_4_length_bound(small_pool):
    checked, violations = 0, 0
    suites = [(i["simple"], i["a"].n_states, i["k"]) for i in small_pool]
    for seed in range(200):
        m, a = medium_instance(seed)
        suites.append((simple(m, a, m.n_states), a.n_states, m.n_states))
    for suite, na, k in suites:
        for w in suite.maximal_tests():
            checked += 1
            violations += len(w) > 3 * na * k
    report(4, violations == 0, f"{checked} maximal tests from {len(suites)} suites, violations={violations}")


def test_criterion_5_universal_context():
    checked, problems = 0, []
    u = universal_nfa(2)
    for seed in range(60):
        m, _ = small_instance(seed)
        for k in (m.n_states, m.n_states + 1):
            suite = simple(m, u, k)
            n_red = minimize(m)[0].n_states
            e = k - n_red
            bound = n_red**2 * 2 ** (e + 1) * n_red
            checked += 1
            if not completeness_check(m, u, suite, k).complete:
                problems.append((seed, k, "incomplete"))
            if suite.n_tests() > bound:
                problems.append((seed, k, suite.n_tests(), bound))
    report(5, not problems, f"{checked} suites with the universal context, problems={problems[:3]}")


def test_criterion_6_baseline_comparison():
    simple_syms, base_syms, ep_violations, guarded = [], [], [], 0
    for m in (2, 4, 6, 8):
        cfg = BenchmarkConfig(head_states=5, tail_states=m, head_inputs=4, shared_alphabet=3, tail_outputs=3, seed=m, count=8)
        for idx in range(cfg.count):
            _, h, t = instance(cfg, idx)
            k = cfg.k
            simple_syms.append(simple(t, image_automaton(h), k).n_symbols())
            p, _ = composite_product(h, t)
            e_p = k * h.n_states - minimize(p)[0].n_states
            if e_p < cfg.extra_states:
                ep_violations.append((m, idx, e_p))
            try:
                base_syms.append(baseline_tail(h, t, k, limit=cfg.baseline_limit).n_symbols())
            except SuiteTooLarge:
                guarded += 1
                base_syms.append(float("inf"))
    ms, mb = statistics.median(simple_syms), statistics.median(base_syms)
    ok = ms < mb and not ep_violations
    report(6, ok, f"32 cascades, median symbols simple={ms:g} baseline={mb:g} (size-guarded={guarded}), e_P<e: {ep_violations}")


def test_criterion_7_complex_vs_simple():
    ratios = []
    seed = 0
    while len(ratios) < 60 and seed < 2000:
        m, a = medium_instance(seed)
        seed += 1
        pre = direct_simulation(a)
        if pre.is_trivial():
            continue
        k = m.n_states
        s, c = simple(m, a, k).n_symbols(), complex(m, a, pre, k).n_symbols()
        ratios.append(c / s if s else 1.0)
    med = statistics.median(ratios)
    report(7, len(ratios) >= 50 and med <= 1.05, f"{len(ratios)} instances with nontrivial preorder, median complex/simple={med:.3f}, max={max(ratios):.3f}")


def test_criterion_8_mutant_kill(small_pool):
    rates = []
    for idx, inst in enumerate(small_pool):
        for algo in ("simple", "complex"):
            if not inst.get(algo + "_complete", True):
                continue
            spec = MutantSpec(inst["m"], inst["k"])
            rates.append(mutant_kill_rate(inst["m"], inst["a"], inst[algo], spec, 1000, seed=idx))
    report(8, rates and all(r == 1.0 for r in rates), f"{len(rates)} verified suites x 1000 mutants, min rate={min(rates)}")


def test_criterion_9_invariants(small_pool):
    problems = []
    machines = list(enumerate_machines(2, 2, 2))
    for idx, inst in enumerate(small_pool):
        for algo in ("simple", "complex"):
            suite = inst[algo]
            words = suite.words()
            if any(w[:-1] not in words for w in words if w):
                problems.append((idx, algo, "prefix"))
            if not all(nfa_accepts(inst["a"], w) for w in words):
                problems.append((idx, algo, "context"))
            for n in machines:
                if suite_passes(inst["m"], n, suite) and separation_violations(inst["m"], suite, n):
                    problems.append((idx, algo, "separation"))
    report(9, not problems, f"{2 * len(small_pool)} suites built with emission checks, problems={problems[:3]}")
