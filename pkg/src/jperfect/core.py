"""Sphere sizes, the regularity quadratic, and the divisibility condition.

Candidate instances are the pairs (w, a) with n = 2w + a.  All values are
exact integers; the quadratic's root threshold is handled through integer
square roots only, never as a float.
"""

from dataclasses import dataclass
from math import comb
from typing import Optional

from .carries import isqrt

__all__ = [
    "CodeParams",
    "RegularityOrder",
    "sphere_size",
    "phi1",
    "sigma1",
    "regularity_order",
    "regularity_divides",
]


@dataclass(frozen=True)
class CodeParams:
    """A candidate instance (w, a), with n = 2w + a derived."""

    w: int
    a: int

    def __post_init__(self):
        if self.w < 1:
            raise ValueError("w must be a positive integer")
        if self.a < 0:
            raise ValueError("a must be non-negative")

    @property
    def n(self) -> int:
        return 2 * self.w + self.a

    @property
    def s(self) -> int:
        """The quantity w + a (= n - w)."""
        return self.w + self.a

    @property
    def admissible(self) -> bool:
        """Strict 0 < a < w/2, decided with exact integers (2a < w)."""
        return 0 < 2 * self.a < self.w


def sphere_size(n: int, w: int, e: int) -> int:
    """Size of an e-sphere: sum_{i=0}^{e} C(w,i) * C(n-w,i)."""
    if not 1 <= w <= n:
        raise ValueError(f"invalid parameters: need 1 <= w <= n, got w={w}, n={n}")
    if not 0 <= e <= min(w, n - w):
        raise ValueError(f"invalid parameters: need 0 <= e <= min(w, n-w), got e={e}")
    return sum(comb(w, i) * comb(n - w, i) for i in range(e + 1))


def phi1(params: CodeParams) -> int:
    """The 1-sphere size 1 + w(w + a)."""
    return 1 + params.w * params.s


def sigma1(w: int, a: int, m: int) -> int:
    """The quadratic m^2 - (2w+a+1)m + w(w+a) + 1 (can be negative)."""
    return m * m - (2 * w + a + 1) * m + w * (w + a) + 1


@dataclass(frozen=True)
class RegularityOrder:
    """Integer-root information for the regularity quadratic.

    ``root`` is the smallest integer root if one exists below the vertex,
    ``guaranteed_k`` the regularity order that is guaranteed regardless,
    and ``floor_l`` the floor of the smaller (possibly irrational) root.
    """

    root: Optional[int]
    guaranteed_k: int
    floor_l: int


def regularity_order(params: CodeParams) -> RegularityOrder:
    """Locate the smaller root of the regularity quadratic exactly.

    The discriminant D = (a+1)^2 + 4(w-1) decides everything: an integer
    root exists iff D is a perfect square and 2w+a+1-sqrt(D) is even.
    Without an integer root, regularity is guaranteed up to k = w (indices
    beyond w are never queried).
    """
    w, a = params.w, params.a
    d = (a + 1) ** 2 + 4 * (w - 1)
    t = 2 * w + a + 1
    sd = isqrt(d)
    csd = sd if sd * sd == d else sd + 1
    floor_l = (t - csd) // 2
    if sd * sd == d and (t - sd) % 2 == 0:
        root = (t - sd) // 2
        return RegularityOrder(root=root, guaranteed_k=root - 1, floor_l=floor_l)
    return RegularityOrder(root=None, guaranteed_k=w, floor_l=floor_l)


def regularity_divides(params: CodeParams, i: int) -> bool:
    """True iff 1 + w(w+a) divides C(2w+a-i, w+a) exactly."""
    if not 0 <= i <= params.w:
        raise ValueError(f"invalid parameter i={i}: need 0 <= i <= w={params.w}")
    return comb(params.n - i, params.s) % phi1(params) == 0
