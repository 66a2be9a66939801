"""Prefix-closed test suites stored as an annotated trie."""

from __future__ import annotations

from .automata import ContextNfa, MealyMachine, Word, mask_states


class NotInContext(ValueError):
    """A test leaves the context language."""

    def __init__(self, word, position):
        self.word = tuple(word)
        self.position = position
        super().__init__(f"test {self.word} is blocked by the context at position {position}")


class TrieNode:
    """One test of the suite.

    ``mstate`` is the specification state reached, ``amask`` the set of
    context states reached (bitmask) and ``out`` the expected output on the
    incoming edge.
    """

    __slots__ = ("parent", "symbol", "depth", "mstate", "amask", "out", "children", "in_cover")

    def __init__(self, parent, symbol, depth, mstate, amask, out):
        self.parent = parent
        self.symbol = symbol
        self.depth = depth
        self.mstate = mstate
        self.amask = amask
        self.out = out
        self.children = {}
        self.in_cover = False

    @property
    def word(self) -> Word:
        syms = []
        node = self
        while node.parent is not None:
            syms.append(node.symbol)
            node = node.parent
        return tuple(reversed(syms))

    def astates(self) -> list:
        return mask_states(self.amask)

    def __repr__(self):
        return f"TrieNode({self.word}, s={self.mstate}, A={self.astates()})"


class SuiteTree:
    """A test suite E ⊆ L_A for M.

    Adding a word adds all of its prefixes.  The tree only grows.
    """

    def __init__(self, machine: MealyMachine, context: ContextNfa):
        if context.n_symbols != machine.n_inputs:
            raise ValueError("context and machine disagree on the input alphabet")
        self.machine = machine
        self.context = context
        self.root = TrieNode(None, None, 0, machine.initial, 1 << context.initial, None)
        self.size = 1

    def child(self, node: TrieNode, i: int) -> TrieNode:
        """Return the child of ``node`` on ``i``, creating it if needed."""
        nxt = node.children.get(i)
        if nxt is None:
            amask = self.context.step_mask(node.amask, i)
            if not amask:
                raise NotInContext(node.word + (i,), node.depth)
            m = self.machine
            nxt = TrieNode(node, i, node.depth + 1, m.next[node.mstate][i], amask, m.out[node.mstate][i])
            node.children[i] = nxt
            self.size += 1
        return nxt

    def extend(self, node: TrieNode, suffix) -> TrieNode:
        for i in suffix:
            node = self.child(node, i)
        return node

    def add(self, word) -> TrieNode:
        word = tuple(word)
        # check first so a rejected word leaves no partial prefix behind
        mask = self.root.amask
        for pos, i in enumerate(word):
            mask = self.context.step_mask(mask, i)
            if not mask:
                raise NotInContext(word, pos)
        return self.extend(self.root, word)

    def find(self, word) -> TrieNode | None:
        node = self.root
        for i in word:
            node = node.children.get(i)
            if node is None:
                return None
        return node

    def __contains__(self, word) -> bool:
        return self.find(word) is not None

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children[i] for i in sorted(node.children, reverse=True))

    def leaves(self):
        for node in self.nodes():
            if not node.children and node.depth > 0:
                yield node

    def words(self) -> set:
        return {node.word for node in self.nodes()}

    def maximal_tests(self) -> list:
        """Leaf words in lexicographic order; the suite {ε} has none."""
        return [leaf.word for leaf in self.leaves()]

    def n_tests(self) -> int:
        return sum(1 for _ in self.leaves())

    def n_symbols(self) -> int:
        return sum(leaf.depth for leaf in self.leaves())

    def context_tree(self):
        """All nodes a/α of Γ(E) as ``(trie node, context state)`` pairs."""
        for node in self.nodes():
            for a in node.astates():
                yield node, a


def add_test(suite: SuiteTree, word) -> SuiteTree:
    suite.add(word)
    return suite


def maximal_tests(suite: SuiteTree) -> list:
    return suite.maximal_tests()


def _separated(u: TrieNode, v: TrieNode) -> bool:
    stack = [(u, v)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        for i, cx in x.children.items():
            cy = y.children.get(i)
            if cy is None:
                continue
            if cx.out != cy.out:
                return True
            stack.append((cx, cy))
    return False


def separable(suite: SuiteTree, alpha, beta) -> bool:
    """alpha #_E beta: some shared continuation inside E yields different outputs."""
    u, v = suite.find(alpha), suite.find(beta)
    if u is None or v is None:
        raise KeyError("both words must belong to the suite")
    return separable_nodes(u, v)


def separable_nodes(u: TrieNode, v: TrieNode) -> bool:
    if u.mstate == v.mstate:
        return False
    return _separated(u, v)


def incompat_preserving(suite: SuiteTree, table, nodes) -> list:
    """Pairs of context-tree nodes with incompatible locations that E fails to separate.

    ``nodes`` is an iterable of ``(trie node, context state)``.  An empty
    result means E is incompatibility-preserving with respect to them.
    """
    nodes = list(nodes)
    missing = []
    for x in range(len(nodes)):
        u, a = nodes[x]
        for y in range(x + 1, len(nodes)):
            v, b = nodes[y]
            if table.locations_incompatible((u.mstate, a), (v.mstate, b)) and not _separated(u, v):
                missing.append(((u.word, a), (v.word, b)))
    return missing
