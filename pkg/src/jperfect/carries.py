"""Base-p digit manipulation, carry counting, and integer roots.

Everything here is exact integer arithmetic; no floating point is
consulted anywhere, so boundary cases (exact powers, exact squares)
are always decided correctly.
"""

import math
from dataclasses import dataclass
from typing import Tuple

__all__ = [
    "DigitVector",
    "to_digits",
    "carries",
    "binom_valuation",
    "isqrt",
    "iroot",
    "ceil_sqrt",
    "forced_alpha",
    "short_interval_check",
    "high_digit_check",
]


def _check_base(p: int) -> None:
    if p < 2:
        raise ValueError(f"invalid base {p}: must be >= 2")


@dataclass(frozen=True)
class DigitVector:
    """Little-endian digit expansion of a non-negative integer.

    Zero is represented by the empty digit tuple.  ``m`` is the index of
    the most significant digit and ``l`` the half-way index used by the
    high-digit condition.
    """

    base: int
    digits: Tuple[int, ...]

    def __post_init__(self):
        _check_base(self.base)
        if self.digits and self.digits[-1] == 0:
            raise ValueError("trailing zero digit")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")

    def value(self) -> int:
        v = 0
        for d in reversed(self.digits):
            v = v * self.base + d
        return v

    @property
    def m(self) -> int:
        """Index of the top digit (-1 for zero)."""
        return len(self.digits) - 1

    @property
    def l(self) -> int:
        """Half index floor(m/2)."""
        return self.m // 2


def to_digits(x: int, p: int) -> DigitVector:
    """Canonical little-endian base-p digit vector of x >= 0."""
    _check_base(p)
    if x < 0:
        raise ValueError("x must be non-negative")
    digits = []
    while x:
        x, r = divmod(x, p)
        digits.append(r)
    return DigitVector(p, tuple(digits))


def carries(x: int, y: int, p: int) -> int:
    """Number of carries in the base-p schoolbook addition of x and y."""
    _check_base(p)
    if x < 0 or y < 0:
        raise ValueError("operands must be non-negative")
    count = 0
    carry = 0
    while x or y or carry:
        s = x % p + y % p + carry
        carry = 1 if s >= p else 0
        count += carry
        x //= p
        y //= p
    return count


def binom_valuation(p: int, n: int, k: int) -> int:
    """p-adic valuation of C(n, k), via carry counting in base p."""
    if k > n:
        raise ValueError(f"invalid parameters: k={k} > n={n}")
    if k < 0:
        raise ValueError("k must be non-negative")
    return carries(k, n - k, p)


def isqrt(x: int) -> int:
    """Integer square root: the r with r^2 <= x < (r+1)^2."""
    if x < 0:
        raise ValueError("x must be non-negative")
    return math.isqrt(x)


def iroot(x: int, k: int) -> int:
    """Integer k-th root: the r with r^k <= x < (r+1)^k.

    Newton iteration on integers, with a final exact correction so that
    exact powers land on the boundary bit-exactly.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 0
    if k == 1:
        return x
    # Initial guess >= true root; Newton then decreases monotonically.
    r = 1 << -(-x.bit_length() // k)
    while True:
        t = ((k - 1) * r + x // r ** (k - 1)) // k
        if t >= r:
            break
        r = t
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def ceil_sqrt(x: int) -> int:
    """Ceiling of the square root, computed exactly."""
    r = isqrt(x)
    return r if r * r == x else r + 1


def forced_alpha(p: int, s: int) -> int:
    """The unique alpha with p^(alpha-1) <= s < p^alpha.

    Equals the base-p digit length of s; no logarithms involved.
    """
    _check_base(p)
    if s < 1:
        raise ValueError("s must be >= 1")
    alpha = 0
    while s:
        s //= p
        alpha += 1
    return alpha


def short_interval_check(p: int, w: int, a: int) -> bool:
    """True iff p^alpha - ceil(sqrt(w)) - 1 <= w + a, with forced alpha.

    The right-hand inequality w + a < p^alpha holds by construction of
    alpha, so only the left side needs testing.
    """
    s = w + a
    alpha = forced_alpha(p, s)
    return p ** alpha - ceil_sqrt(w) - 1 <= s


def high_digit_check(p: int, s: int) -> bool:
    """True iff all base-p digits of s at positions l+1..m equal p-1."""
    if s < 1:
        raise ValueError("s must be >= 1")
    dv = to_digits(s, p)
    return all(d == p - 1 for d in dv.digits[dv.l + 1 :])
