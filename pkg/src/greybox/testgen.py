"""Suite generators: ``simple``, ``complex`` and the composite-machine W-method baseline.

Both ``simple`` and ``complex`` start from a core cover V and explore
depth-first from every word of V.  A branch is cut as soon as every context
state reached by it carries a redundancy certificate: a monotonous ranking
of earlier nodes on the branch plus a basis of cover nodes, k+1 nodes in
total, all pairwise separated by the suite.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .automata import (
    AlphabetError,
    ContextNfa,
    MealyMachine,
    _check_alphabets,
    composite_product,
    image_automaton,
    mask_states,
    product_bfs,
    universal_nfa,
)
from .compat import CompatTable, Preorder, compute_compat, harmonized_identifiers, minimize
from .coverage import Cover, cover, dominates, reduce_core, weak_core
from .suite import SuiteTree, TrieNode, incompat_preserving


class GenerationTimeout(RuntimeError):
    pass


class SuiteTooLarge(RuntimeError):
    """The requested suite would exceed the configured size ceiling."""


class CertificateError(AssertionError):
    """A certificate violated one of its invariants (raised in debug mode only)."""


@dataclass
class Certificate:
    """Redundancy certificate for the node ``target``.

    ``ranking`` and ``basis`` hold ``(trie node, context state)`` pairs.
    """

    target: tuple
    ranking: list
    basis: list

    def __len__(self):
        return len(self.ranking) + len(self.basis)


@dataclass
class GenContext:
    machine: MealyMachine
    context: ContextNfa
    k: int
    table: CompatTable
    pre: Preorder
    core: list
    cover: Cover
    to_cvr: dict
    suite: SuiteTree
    general: bool
    identifiers: dict | None = None
    debug: bool = False
    deadline: float | None = None
    alpha_v: TrieNode | None = None
    max_depth: int = 0
    depth_by_root: dict = field(default_factory=dict)
    n_certificates: int = 0
    n_explored: int = 0
    cvr_node: dict = field(default_factory=dict)
    _sep_cache: dict = field(default_factory=dict)
    _basis_cache: dict = field(default_factory=dict)
    _dominator_cache: dict = field(default_factory=dict)
    n_classes: int = 0
    pre_trivial: bool = True

    @property
    def e(self) -> int:
        return self.k * self.context.n_states - self.n_classes


def _validate(m: MealyMachine, a: ContextNfa, k: int) -> None:
    _check_alphabets(m, a)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")


def _setup(m, a, k, table, core, pre, general, debug, timeout) -> GenContext:
    v, to_cvr = cover(m, a, core)
    suite = SuiteTree(m, a)
    for w in v.ordered():
        suite.add(w).in_cover = True
    ctx = GenContext(
        machine=m,
        context=a,
        k=k,
        table=table,
        pre=pre,
        core=core,
        cover=v,
        to_cvr=to_cvr,
        suite=suite,
        general=general,
        debug=debug,
        deadline=None if timeout is None else time.monotonic() + timeout,
    )
    ctx.cvr_node = {loc: suite.find(w) for loc, w in to_cvr.items()}
    ctx.n_classes = len(weak_core(m, a, table)) if general else len(core)
    ctx.pre_trivial = pre.is_trivial()
    return ctx


def _finish(ctx: GenContext, algorithm: str) -> SuiteTree:
    ctx.suite.info = {
        "algorithm": algorithm,
        "k": ctx.k,
        "e": ctx.e,
        "n_classes": ctx.n_classes,
        "core": len(ctx.core),
        "cover": len(ctx.cover),
        "max_depth": ctx.max_depth,
        "depth_by_root": dict(ctx.depth_by_root),
        "certificates": ctx.n_certificates,
        "explored": ctx.n_explored,
    }
    return ctx.suite


def _explore_all(ctx: GenContext) -> None:
    for w in ctx.cover.ordered():
        ctx.alpha_v = ctx.suite.find(w)
        ctx.depth_by_root[w] = 0
        explore(ctx, [])


def simple(m: MealyMachine, a: ContextNfa, k: int, *, debug: bool = False, timeout: float | None = None) -> SuiteTree:
    """k-complete suite for ``m`` in the context of ``a`` using flat certificates."""
    _validate(m, a, k)
    table = compute_compat(m, a)
    core = weak_core(m, a, table)
    ctx = _setup(m, a, k, table, core, Preorder.identity(a.n_states), False, debug, timeout)
    ctx.identifiers = harmonized_identifiers(m, a, table)
    for loc in core:
        node = ctx.cvr_node[loc]
        for w in ctx.identifiers[loc]:
            ctx.suite.extend(node, w)
    _explore_all(ctx)
    return _finish(ctx, "simple")


def complex(
    m: MealyMachine, a: ContextNfa, pre: Preorder, k: int, *, debug: bool = False, timeout: float | None = None
) -> SuiteTree:
    """k-complete suite exploiting a sound under-approximation ``pre`` of language inclusion."""
    _validate(m, a, k)
    if pre.n_states != a.n_states:
        raise ValueError("preorder size does not match the context")
    table = compute_compat(m, a)
    core = reduce_core(weak_core(m, a, table), table, pre)
    ctx = _setup(m, a, k, table, core, pre, True, debug, timeout)
    _explore_all(ctx)
    return _finish(ctx, "complex")


def explore(ctx: GenContext, path: list) -> None:
    """Depth-first expansion below ``alpha_v``; ``path`` holds the trie nodes of alpha_v·beta_{<=j}.

    Every visited word joins the suite, so branches that die out inside
    L_A are tested as well.
    """
    if ctx.deadline is not None and time.monotonic() > ctx.deadline:
        raise GenerationTimeout("suite generation exceeded its time budget")
    current = path[-1] if path else ctx.alpha_v
    a = ctx.context
    for i in range(ctx.machine.n_inputs):
        if not a.step_mask(current.amask, i):
            continue
        existing = current.children.get(i)
        if existing is not None and existing.in_cover:
            continue
        child = ctx.suite.child(current, i)
        branch = path + [child]
        ctx.n_explored += 1
        depth = len(branch)
        ctx.max_depth = max(ctx.max_depth, depth)
        root = ctx.alpha_v.word
        ctx.depth_by_root[root] = max(ctx.depth_by_root.get(root, 0), depth)
        certs = search_certs(ctx, branch)
        if certs is None:
            explore(ctx, branch)
            continue
        for cert in certs:
            if ctx.general:
                exploit_cert_general(ctx, cert)
            else:
                exploit_cert_flat(ctx, cert)
            if ctx.debug:
                _check_preserving(ctx, cert)


def search_certs(ctx: GenContext, path: list) -> list | None:
    """One certificate of size k+1 per context state at the end of ``path``, or None."""
    if not path:
        return None
    target = path[-1]
    certs = []
    for a in target.astates():
        cert = _find_certificate(ctx, path, a)
        if cert is None:
            return None
        certs.append(cert)
    ctx.n_certificates += len(certs)
    return certs


def _find_certificate(ctx: GenContext, path: list, a: int) -> Certificate | None:
    need = ctx.k + 1
    cap = ctx.machine.n_states
    if ctx.general and not ctx.pre_trivial:
        candidates = build_rankings_general(ctx, path, a)
        flat = build_rankings_flat(ctx, path, a)
        candidates += [r for r in flat if r not in candidates]
    else:
        candidates = build_rankings_flat(ctx, path, a)
    for b, ranking in candidates:
        if len(ranking) + cap < need:
            continue
        basis = basis_general(ctx, ranking, b) if ctx.general else basis_flat(ctx, b)
        if len(ranking) + len(basis) >= need:
            cert = _trim(Certificate((path[-1], a), list(ranking), list(basis)), need)
            if ctx.debug:
                check_certificate(ctx, cert)
            return cert
    return None


def _trim(cert: Certificate, need: int) -> Certificate:
    excess = len(cert) - need
    drop = min(excess, len(cert.ranking))
    cert.ranking = cert.ranking[drop:]
    excess -= drop
    if excess > 0:
        cert.basis = cert.basis[: len(cert.basis) - excess]
    return cert


def _back_propagate(ctx: GenContext, path: list, a: int) -> list:
    """Context states c with c/alpha_v·beta_{<=j} ≼ a/alpha_v·beta, as bitmasks per j."""
    masks = [0] * len(path)
    masks[-1] = 1 << a
    for j in range(len(path) - 2, -1, -1):
        masks[j] = path[j].amask & ctx.context.pre_mask(masks[j + 1], path[j + 1].symbol)
    return masks


def build_rankings_flat(ctx: GenContext, path: list, a: int) -> list:
    """For every context state b, the ranking of all b-nodes preceding the target on the branch."""
    masks = _back_propagate(ctx, path, a)
    out = []
    for b in range(ctx.context.n_states):
        bit = 1 << b
        out.append((b, [(node, b) for node, mask in zip(path, masks) if mask & bit]))
    return out


def build_rankings_general(ctx: GenContext, path: list, a: int) -> list:
    """Longest monotonous ranking ending in each context state b, by dynamic programming."""
    masks = _back_propagate(ctx, path, a)
    n = ctx.context.n_states
    leq = ctx.pre.leq
    above = [[c for c in range(n) if leq[b, c]] for b in range(n)]
    prev = [[] for _ in range(n)]
    for node, mask in zip(path, masks):
        cur = list(prev)
        for b in mask_states(mask):
            best = max(above[b], key=lambda c: (len(prev[c]), -c))
            cur[b] = prev[best] + [(node, b)]
        prev = cur
    return [(b, prev[b]) for b in range(n)]


def basis_flat(ctx: GenContext, c: int) -> list:
    """Cover nodes of every core location sitting at context state c."""
    return [(ctx.cvr_node[(s, q)], q) for (s, q) in ctx.core if q == c]


def separating_state(ctx: GenContext, loc1: tuple, loc2: tuple) -> int | None:
    """A context state x ⊑ both context states at which the machine states are incompatible.

    Words of L_A(x) then separate the two locations and can extend both of
    their tests.  Prefers the shortest witness.
    """
    key = (loc1, loc2) if loc1 <= loc2 else (loc2, loc1)
    if key in ctx._sep_cache:
        return ctx._sep_cache[key]
    (s, c), (t, d) = key
    leq, split = ctx.pre.leq, ctx.table.split
    best = None
    for x in range(ctx.context.n_states):
        if leq[x, c] and leq[x, d]:
            r = split[x, s, t]
            if r and (best is None or r < best[0]):
                best = (r, x)
    res = None if best is None else best[1]
    ctx._sep_cache[key] = res
    return res


def _needs_separation(ctx: GenContext, basis_loc: tuple, rank_loc: tuple) -> bool:
    (t, d), (s, c) = basis_loc, rank_loc
    return not (ctx.pre.leq[c, d] and ctx.table.compatible(s, t, c))


def basis_general(ctx: GenContext, ranking: list, b: int | None = None) -> list:
    """Greedy basis for a monotonous ranking, drawn from dominating core locations.

    A candidate is admitted only if it stays separable from every basis node
    already chosen and, towards each ranking node, is either a compatible
    dominator or separable from it.
    """
    rank_locs = tuple((node.mstate, c) for node, c in ranking)
    targets = tuple(dict.fromkeys(c for _, c in ranking)) if ranking else (() if b is None else (b,))
    key = (rank_locs, targets)
    chosen = ctx._basis_cache.get(key)
    if chosen is None:
        chosen = _greedy_basis(ctx, rank_locs, targets)
        ctx._basis_cache[key] = chosen
    return [(ctx.cvr_node[q], q[1]) for q in chosen]


def _dominators(ctx: GenContext, loc: tuple) -> list:
    found = ctx._dominator_cache.get(loc)
    if found is None:
        found = [q for q in ctx.core if dominates(ctx.table, ctx.pre, q, loc)]
        ctx._dominator_cache[loc] = found
    return found


def _greedy_basis(ctx: GenContext, rank_locs: tuple, targets: tuple) -> list:
    chosen: list = []
    for c in targets:
        for s in range(ctx.machine.n_states):
            doms = _dominators(ctx, (s, c))
            if any(q in chosen for q in doms):
                continue
            for q in doms:
                if any(separating_state(ctx, q, r) is None for r in chosen):
                    continue
                if any(_needs_separation(ctx, q, r) and separating_state(ctx, q, r) is None for r in rank_locs):
                    continue
                chosen.append(q)
                break
    return chosen


def exploit_cert_flat(ctx: GenContext, cert: Certificate) -> None:
    """Append the harmonized identifier of every ranking node's location."""
    for node, c in cert.ranking:
        for w in ctx.identifiers[(node.mstate, c)]:
            ctx.suite.extend(node, w)


def _append_pair(ctx: GenContext, u: TrieNode, v: TrieNode, s: int, t: int, x: int) -> None:
    w = ctx.table.witness(s, t, x)
    ctx.suite.extend(u, w)
    ctx.suite.extend(v, w)


def exploit_cert_general(ctx: GenContext, cert: Certificate) -> None:
    """Make the suite separate every pair of certificate nodes that must be told apart."""
    table = ctx.table
    ranking, basis = cert.ranking, cert.basis
    for x in range(len(ranking)):
        u, cu = ranking[x]
        for y in range(x + 1, len(ranking)):
            v, cv = ranking[y]
            # monotonicity gives cu ⊒ cv, so L_A(cv) is the shared language
            if table.incompatible(u.mstate, v.mstate, cv):
                _append_pair(ctx, u, v, u.mstate, v.mstate, cv)
    for w, d in basis:
        for v, c in ranking:
            bl, rl = (w.mstate, d), (v.mstate, c)
            if _needs_separation(ctx, bl, rl):
                _append_pair(ctx, w, v, w.mstate, v.mstate, separating_state(ctx, bl, rl))
    for (w1, d1), (w2, d2) in itertools.combinations(basis, 2):
        x = separating_state(ctx, (w1.mstate, d1), (w2.mstate, d2))
        _append_pair(ctx, w1, w2, w1.mstate, w2.mstate, x)


def check_certificate(ctx: GenContext, cert: Certificate) -> None:
    """Raise CertificateError unless ``cert`` satisfies every certificate invariant."""
    table, leq = ctx.table, ctx.pre.leq
    target, a = cert.target
    if len(cert) != ctx.k + 1:
        raise CertificateError(f"certificate has size {len(cert)}, expected {ctx.k + 1}")
    depths = [node.depth for node, _ in cert.ranking]
    if depths != sorted(set(depths)):
        raise CertificateError("ranking is not strictly ordered by prefix")
    for (n1, c1), (n2, c2) in zip(cert.ranking, cert.ranking[1:]):
        if not leq[c2, c1]:
            raise CertificateError("ranking is not monotonous")
    tword = target.word
    for node, c in cert.ranking:
        if node.in_cover:
            raise CertificateError("ranking node lies in the cover")
        w = node.word
        if tword[: len(w)] != w:
            raise CertificateError("ranking node is not a prefix of the target")
        if any(tword[:j] in ctx.cover.words for j in range(len(w) + 1, len(tword))):
            raise CertificateError("a cover word separates a ranking node from the target")
        mask = 1 << c
        for i in tword[len(w) :]:
            mask = ctx.context.step_mask(mask, i)
        if not (node.amask >> c) & 1 or not (mask >> a) & 1:
            raise CertificateError("ranking node does not precede the target")
    for node, d in cert.basis:
        if not node.in_cover or not (node.amask >> d) & 1:
            raise CertificateError("basis node outside the cover's context tree")
    for (n1, d1), (n2, d2) in itertools.combinations(cert.basis, 2):
        if not table.locations_incompatible((n1.mstate, d1), (n2.mstate, d2)):
            raise CertificateError("basis nodes are not pairwise incompatible")
    for nb, d in cert.basis:
        for nr, c in cert.ranking:
            if not table.locations_incompatible((nb.mstate, d), (nr.mstate, c)) and not leq[c, d]:
                raise CertificateError("compatible basis node does not dominate a ranking node")
    rset = {(id(n), c) for n, c in cert.ranking}
    if any((id(n), d) in rset for n, d in cert.basis):
        raise CertificateError("ranking and basis overlap")


def _check_preserving(ctx: GenContext, cert: Certificate) -> None:
    missing = incompat_preserving(ctx.suite, ctx.table, cert.ranking + cert.basis)
    if missing:
        raise CertificateError(f"suite does not separate certificate nodes: {missing[:3]}")


# -- composite-machine baseline ------------------------------------------------


def state_cover(m: MealyMachine) -> list:
    order, access = product_bfs(m, universal_nfa(m.n_inputs))
    return [access[loc] for loc in order]


def characterization_set(m: MealyMachine) -> list:
    """Pairwise shortest separating words of a reduced machine."""
    table = compute_compat(m, universal_nfa(m.n_inputs))
    n = m.n_states
    words = {table.witness(s, t, 0) for s in range(n) for t in range(s + 1, n)}
    return sorted(words, key=lambda w: (len(w), w))


def w_method_size(n_cover: int, n_inputs: int, e: int, n_char: int) -> int:
    middle = sum(n_inputs**j for j in range(e + 2))
    return n_cover * middle * max(n_char, 1)


def w_method_words(p: MealyMachine, k_p: int, *, limit: int | None = None):
    """Words of V·I^{<=e+1}·W for a reduced machine ``p``; yields them lazily."""
    n = p.n_states
    if k_p < n:
        raise ValueError(f"k_P = {k_p} is below the number of states {n}")
    e = k_p - n
    v = state_cover(p)
    w = characterization_set(p) or [()]
    if limit is not None and w_method_size(len(v), p.n_inputs, e, len(w)) > limit:
        raise SuiteTooLarge(f"W-method suite for {n} states with {e} extra states exceeds {limit} words")
    inputs = range(p.n_inputs)
    for prefix in v:
        for j in range(e + 2):
            for mid in itertools.product(inputs, repeat=j):
                for suffix in w:
                    yield prefix + mid + suffix


def w_method(p: MealyMachine, k_p: int, *, limit: int | None = None) -> SuiteTree:
    """Classical k_P-complete suite (unrestricted inputs) for ``p``; reduces ``p`` first."""
    reduced, _ = minimize(p)
    suite = SuiteTree(reduced, universal_nfa(reduced.n_inputs))
    for word in w_method_words(reduced, k_p, limit=limit):
        suite.add(word)
    suite.info = {"algorithm": "w-method", "n_states": reduced.n_states, "k": k_p, "e": k_p - reduced.n_states}
    return suite


def baseline_tail(h: MealyMachine, t: MealyMachine, k: int, *, limit: int | None = None) -> SuiteTree:
    """Suite for the tail T obtained by W-method testing of the composite machine.

    The composite is tested for k·|S_H| states and every test is mapped
    through the head's output function.
    """
    if t.n_inputs != h.n_outputs:
        raise AlphabetError("tail inputs must match head outputs")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    p, _pairs = composite_product(h, t)
    reduced, _ = minimize(p)
    k_p = k * h.n_states
    suite = SuiteTree(t, image_automaton(h))
    for word in w_method_words(reduced, k_p, limit=limit):
        suite.add(h.output(word))
    suite.info = {
        "algorithm": "baseline",
        "k": k,
        "product_states": p.n_states,
        "reduced_product_states": reduced.n_states,
        "k_P": k_p,
        "e_P": k_p - reduced.n_states,
    }
    return suite
