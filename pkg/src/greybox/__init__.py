"""k-complete test suites for Mealy machines whose inputs are restricted by a context NFA."""

from .automata import (
    AlphabetError,
    ContextNfa,
    MealyMachine,
    composite_product,
    image_automaton,
    mealy_run,
    nfa_accepts,
    nfa_step,
    universal_nfa,
)
from .compat import (
    CompatTable,
    Preorder,
    compute_compat,
    direct_simulation,
    harmonized_identifiers,
    minimize,
    quotient_by_simulation,
)
from .coverage import Cover, cover, reduce_core, weak_core
from .oracle import Verdict, completeness_check, mutant_kill_rate, restricted_equiv, suite_passes
from .suite import NotInContext, SuiteTree, separable
from .testgen import baseline_tail, complex, simple, w_method

__all__ = [
    "AlphabetError",
    "CompatTable",
    "ContextNfa",
    "Cover",
    "MealyMachine",
    "NotInContext",
    "Preorder",
    "SuiteTree",
    "Verdict",
    "baseline_tail",
    "completeness_check",
    "complex",
    "composite_product",
    "compute_compat",
    "cover",
    "direct_simulation",
    "harmonized_identifiers",
    "image_automaton",
    "mealy_run",
    "minimize",
    "mutant_kill_rate",
    "nfa_accepts",
    "nfa_step",
    "quotient_by_simulation",
    "reduce_core",
    "restricted_equiv",
    "separable",
    "simple",
    "suite_passes",
    "universal_nfa",
    "w_method",
    "weak_core",
]
