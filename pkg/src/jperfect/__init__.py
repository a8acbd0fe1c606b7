"""Exact-arithmetic nonexistence search for 1-perfect codes in J(n, w).

The library evaluates a cascade of necessary arithmetic conditions on
candidate parameters (w, a) with n = 2w + a, runs a heap-driven search
for pairs of perfect powers in short intervals below 2^C, and seals the
results into machine-checkable nonexistence certificates.
"""

__version__ = "0.1.0"

from .carries import (
    DigitVector,
    binom_valuation,
    carries,
    ceil_sqrt,
    forced_alpha,
    high_digit_check,
    iroot,
    isqrt,
    short_interval_check,
    to_digits,
)
from .core import (
    CodeParams,
    RegularityOrder,
    phi1,
    regularity_divides,
    regularity_order,
    sigma1,
    sphere_size,
)
from .egyptian import (
    AlphaSet,
    RationalInterval,
    alpha_window,
    enumerate_sets,
    is_seven_rough,
    min_prime_factor,
    parse_decimal,
    reciprocal_sum,
)
from .factoring import (
    FactorBudgetError,
    PrimalityVerdict,
    factor,
    is_prime,
    is_squarefree,
    prime_verdict,
)
from .powersearch import (
    Hit,
    PowerEntry,
    SearchConfig,
    SearchResult,
    brute_search,
    close_pair,
    exponent_set,
    expected_increments,
    heap_search,
)
from .pipeline import (
    Certificate,
    CertificateSchemaError,
    HitVerdict,
    ParamVerdict,
    SweepResult,
    check_parameters,
    classify_hit,
    conclude,
    conclude_sweep,
    sweep,
    verify_certificate,
)
