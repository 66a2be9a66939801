"""Complete suites catch every small faulty implementation; truncated ones do not.

Mutants retarget transitions, flip outputs or add states while staying
within k states.  A mutant counts as caught if the suite exposes it or if
it behaves like the specification on every word the context allows.
"""

from greybox import SuiteTree, completeness_check, mutant_kill_rate, simple
from greybox.automata import MealyMachine
from greybox.bench import random_nfa
from greybox.oracle import MutantSpec

m = MealyMachine(2, 2, [[1, 2], [2, 2], [0, 1]], [[0, 1], [0, 1], [1, 1]], 0)
a = random_nfa(3, 2, seed=5, density=0.5)
k = 3
full = simple(m, a, k)
print(f"generated suite: {full.n_tests()} tests, complete: {completeness_check(m, a, full, k).complete}")

half = SuiteTree(m, a)
for word in full.maximal_tests()[::2]:
    half.add(word[:-1])
verdict = completeness_check(m, a, half, k)
print(f"every other test, last symbol dropped: {half.n_tests()} tests, complete: {verdict.complete}")
if not verdict.complete:
    print("  a machine passing it but failing on", verdict.witness)

spec = MutantSpec(m, k)
for name, suite in (("generated", full), ("truncated", half)):
    print(f"{name}: kill rate {mutant_kill_rate(m, a, suite, spec, 1000, seed=1):.3f}")
