"""Exact reciprocal sums over exponent sets and their feasible windows.

The only non-integer quantities in the whole pipeline live here: the
reciprocal sums are exact rationals, and the logarithmic window around 2
is computed as a certified rational enclosure (truncated atanh series
with a proven remainder bound, rounded outward), so every comparison is
decided exactly.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .carries import isqrt

__all__ = [
    "AlphaSet",
    "RationalInterval",
    "reciprocal_sum",
    "min_prime_factor",
    "is_seven_rough",
    "enumerate_sets",
    "alpha_window",
    "parse_decimal",
]


@dataclass(frozen=True)
class AlphaSet:
    """A strictly increasing tuple of candidate exponents."""

    values: Tuple[int, ...]

    def __post_init__(self):
        for v in self.values:
            if v < 1:
                raise ValueError("exponents must be positive")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("exponents must be strictly increasing")

    @classmethod
    def of(cls, values: Iterable[int], require_coprime: bool = False) -> "AlphaSet":
        s = cls(tuple(sorted(values)))
        if require_coprime and not s.is_pairwise_coprime():
            raise ValueError(f"exponents not pairwise coprime: {s.values}")
        return s

    @property
    def r(self) -> int:
        return len(self.values)

    def is_pairwise_coprime(self) -> bool:
        vals = self.values
        return all(
            math.gcd(vals[i], vals[j]) == 1
            for i in range(len(vals))
            for j in range(i + 1, len(vals))
        )

    def rough_count(self) -> int:
        return sum(1 for v in self.values if is_seven_rough(v))


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"invalid window: lo={self.lo} > hi={self.hi}")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


def reciprocal_sum(s) -> Fraction:
    """Exact reduced sum of reciprocals; the empty set sums to 0."""
    values = s.values if isinstance(s, AlphaSet) else tuple(s)
    return sum((Fraction(1, v) for v in values), Fraction(0))


def min_prime_factor(k: int) -> Optional[int]:
    """Smallest prime dividing k, or None for k = 1."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return None
    if k % 2 == 0:
        return 2
    d = 3
    while d * d <= k:
        if k % d == 0:
            return d
        d += 2
    return k


def is_seven_rough(k: int) -> bool:
    """True iff k > 1 and every prime factor of k is >= 7."""
    if k <= 1:
        return False
    return k % 2 != 0 and k % 3 != 0 and k % 5 != 0


def enumerate_sets(
    max_terms: int,
    window: RationalInterval,
    alpha_cap: int,
    require_coprime: bool = True,
    min_rough_count: int = 0,
) -> List[AlphaSet]:
    """All non-empty exponent sets whose reciprocal sum lies in window.

    Complete branch-and-bound enumeration over strictly increasing sets
    with at most max_terms elements, all <= alpha_cap.  Pruning is exact:
    a branch is cut only when the partial sum plus the largest possible
    remaining tail cannot reach window.lo (the partial sum alone already
    never exceeds window.hi along a kept branch).
    """
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    if alpha_cap < 1:
        raise ValueError("alpha_cap must be positive")
    results: List[Tuple[int, ...]] = []
    chosen: List[int] = []

    def best_tail(start: int, slots: int) -> Fraction:
        # largest achievable additional sum: the slots smallest values > start
        stop = min(start + slots, alpha_cap)
        return sum((Fraction(1, j) for j in range(start + 1, stop + 1)), Fraction(0))

    def dfs(start: int, partial: Fraction, rough_now: int) -> None:
        slots = max_terms - len(chosen)
        if chosen and window.lo <= partial and rough_now >= min_rough_count:
            results.append(tuple(chosen))
        if slots == 0:
            return
        if rough_now + slots < min_rough_count:
            return  # even all-rough completions cannot reach the quota
        for v in range(start, alpha_cap + 1):
            new = partial + Fraction(1, v)
            if new + best_tail(v, slots - 1) < window.lo:
                break  # larger v only shrinks every term: no set can reach lo
            if new > window.hi:
                continue
            if require_coprime and any(math.gcd(v, c) > 1 for c in chosen):
                continue
            chosen.append(v)
            dfs(v + 1, new, rough_now + (1 if is_seven_rough(v) else 0))
            chosen.pop()

    dfs(1, Fraction(0), 0)
    return [AlphaSet(t) for t in sorted(results)]


def parse_decimal(text: str) -> Fraction:
    """Exact rational value of a decimal string like '1.99' -> 199/100."""
    return Fraction(text)


# --- certified logarithm enclosures ---------------------------------------

_ERR = Fraction(1, 1 << 130)


def _atanh_bounds(z: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of atanh(z) for 0 <= z <= 1/3, via the odd power series."""
    if z == 0:
        return Fraction(0), Fraction(0)
    total = Fraction(0)
    zz = z * z
    term = z
    k = 0
    while term / (2 * k + 1) > _ERR:
        total += term / (2 * k + 1)
        term *= zz
        k += 1
    # remainder of the alternating-free series is bounded by a geometric tail
    rem = term / ((2 * k + 1) * (1 - zz))
    return total, total + rem


def _ln2_bounds() -> Tuple[Fraction, Fraction]:
    lo, hi = _atanh_bounds(Fraction(1, 3))
    return 2 * lo, 2 * hi


def _ln_bounds(q: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of ln(q) for rational q > 1."""
    if q <= 1:
        raise ValueError("q must exceed 1")
    e = q.numerator.bit_length() - q.denominator.bit_length()
    m = q / (Fraction(2) ** e)
    if m < 1:
        e -= 1
        m *= 2
    # m in [1, 2): ln m = 2*atanh((m-1)/(m+1)), argument in [0, 1/3]
    z = (m - 1) / (m + 1)
    at_lo, at_hi = _atanh_bounds(z)
    ln2_lo, ln2_hi = _ln2_bounds()
    return e * ln2_lo + 2 * at_lo, e * ln2_hi + 2 * at_hi


def _round_outward(lo: Fraction, hi: Fraction, digits: int = 2) -> RationalInterval:
    scale = 10 ** digits
    return RationalInterval(
        Fraction(math.floor(lo * scale), scale),
        Fraction(math.ceil(hi * scale), scale),
    )


def alpha_window(n_min: int) -> RationalInterval:
    """Rational interval guaranteed to contain every feasible reciprocal sum.

    For every admissible (w, a) with n = 2w + a >= n_min, the sum of the
    forced exponents' reciprocals lies within 4/sqrt(w+a) of
    1 + log_{w+a} w, and w + a >= n_min/2 with w/(w+a) > 2/3.  Both
    endpoints are certified enclosures rounded outward to two decimals
    (the rounding also makes the window monotone under refinement).
    """
    if n_min < 10:
        raise ValueError("n_min must be >= 10")
    s_min = n_min // 2
    # upper bound on 4/sqrt(s) over s >= s_min
    mu_hi = Fraction(4, isqrt(s_min))
    # upper bound on log_s(3/2) over s >= s_min
    l32_lo, l32_hi = _ln_bounds(Fraction(3, 2))
    ls_lo, ls_hi = _ln_bounds(Fraction(s_min))
    lam_hi = l32_hi / ls_lo
    lo = 2 - lam_hi - mu_hi
    hi = 2 + mu_hi
    return _round_outward(lo, hi)
