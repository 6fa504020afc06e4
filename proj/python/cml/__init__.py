"""Prime and semiprime solution counts for bihomogeneous systems, with the
local densities, arc machinery and geometry checks behind them."""

from ._core import (
    A,
    BudgetError,
    CmlError,
    HypothesisError,
    InputError,
    J,
    System,
    check_inequality,
    codim_halving,
    count_prime_solutions,
    count_semiprime_solutions,
    hensel_check,
    locate,
    nu,
    rank_locus_count,
    schedule,
    singular_series,
    threshold_bihomogeneous,
    threshold_prime_comparison,
    threshold_semiprime_delta,
    threshold_two_semiprimes,
    verify,
    weyl_chain,
)

__all__ = [
    "A",
    "BudgetError",
    "CmlError",
    "HypothesisError",
    "InputError",
    "J",
    "System",
    "check_inequality",
    "codim_halving",
    "count_prime_solutions",
    "count_semiprime_solutions",
    "hensel_check",
    "locate",
    "nu",
    "rank_locus_count",
    "schedule",
    "singular_series",
    "threshold_bihomogeneous",
    "threshold_prime_comparison",
    "threshold_semiprime_delta",
    "threshold_two_semiprimes",
    "verify",
    "weyl_chain",
]
