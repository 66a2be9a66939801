"""Testing the tail of a two-component cascade.

The head H feeds the tail T, so T only ever sees words that H can emit.
We build the NFA of those words, generate a suite for T inside it and
check the suite exhaustively against every machine with at most k states.
"""

from greybox import completeness_check, image_automaton, simple
from greybox.bench import gen_random_reduced
from greybox.formats import dump_nfa

head = gen_random_reduced(states=3, inputs=3, outputs=2, seed=4)
tail = gen_random_reduced(states=2, inputs=2, outputs=2, seed=9)
context = image_automaton(head)
print("words the head can emit, as an NFA:")
print(dump_nfa(context))

k = tail.n_states
suite = simple(tail, context, k)
print(f"suite for the tail with k={k}: {suite.n_tests()} tests, {suite.n_symbols()} symbols")
for word in suite.maximal_tests()[:8]:
    print("  ", " ".join(map(str, word)), "->", " ".join(map(str, tail.output(word))))
if suite.n_tests() > 8:
    print("   ...")

verdict = completeness_check(tail, context, suite, k)
print("exhaustive check:", verdict.to_json())
