"""When one context state can do everything another can, tests can stop earlier.

Direct simulation finds pairs b ⊑ c of context states where every word
readable from b is readable from c.  The complex generator uses such
pairs to build longer rankings and smaller cores, which usually shortens
the suite.
"""

import statistics

from greybox import complex, direct_simulation, simple
from greybox.automata import MealyMachine
from greybox.bench import random_nfa, rng_for

ratios = []
for seed in range(200):
    rng = rng_for(seed)
    n = int(rng.integers(2, 6))
    m = MealyMachine(3, 2, rng.integers(n, size=(n, 3)).tolist(), rng.integers(2, size=(n, 3)).tolist(), 0)
    a = random_nfa(int(rng.integers(2, 5)), 3, seed, density=0.3)
    pre = direct_simulation(a)
    if pre.is_trivial():
        continue
    s = simple(m, a, n).n_symbols()
    c = complex(m, a, pre, n).n_symbols()
    ratios.append(c / s)
    if len(ratios) <= 5:
        print(f"seed {seed}: ⊑ pairs {pre.strict_pairs()}, simple {s} symbols, complex {c} symbols")

print(f"{len(ratios)} instances with a nontrivial preorder")
print(f"complex/simple symbol ratio: median {statistics.median(ratios):.3f}, max {max(ratios):.3f}")
