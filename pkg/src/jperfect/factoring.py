"""Primality testing, factorization, and squarefreeness.

Primality is exact below ~3.3e24 (fixed Miller-Rabin witness set, which
comfortably covers 2^64); above that a BPSW test plus 64 random
Miller-Rabin rounds gives a strong probable-prime verdict whose method is
reported so downstream certificates can state their confidence honestly.

Factorization is trial division by primes below 10^5 followed by Brent's
variant of Pollard rho, with a primality gate before each recursion and a
configurable iteration budget that errors out instead of silently
truncating.
"""

import math
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .carries import iroot

__all__ = [
    "PrimalityVerdict",
    "FactorBudgetError",
    "is_prime",
    "prime_verdict",
    "factor",
    "is_squarefree",
    "small_primes",
]

# Deterministic Miller-Rabin witnesses valid for all n < 3317044064679887385961981
# (in particular for all n < 2^64).
_DET_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DET_LIMIT = 3317044064679887385961981

_TRIAL_LIMIT = 10 ** 5
_smallprimes_cache: Optional[List[int]] = None


def small_primes(limit: int = _TRIAL_LIMIT) -> List[int]:
    """Primes below limit, via a plain sieve (cached for the default)."""
    global _smallprimes_cache
    if limit == _TRIAL_LIMIT and _smallprimes_cache is not None:
        return _smallprimes_cache
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    primes = [i for i in range(limit) if sieve[i]]
    if limit == _TRIAL_LIMIT:
        _smallprimes_cache = primes
    return primes


class FactorBudgetError(RuntimeError):
    """Raised when factorization exceeds its iteration budget."""


@dataclass(frozen=True)
class PrimalityVerdict:
    is_prime: bool
    method: str  # "deterministic" or "probabilistic"


def _mr_witness(a: int, d: int, s: int, n: int) -> bool:
    """True if a witnesses compositeness of n = d*2^s + 1 (d odd)."""
    a %= n
    if a <= 1:
        return False
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = (x * x) % n
        if x == n - 1:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge parameters.

    Assumes n odd, n > 2, and n not a perfect square.
    """
    d_param = 5
    while True:
        j = _jacobi(d_param % n, n)
        if j == -1:
            break
        if j == 0 and abs(d_param) % n != 0:
            return False  # shares a factor with n
        d_param = -(d_param + 2) if d_param > 0 else -(d_param - 2)
    p_param = 1
    q_param = (1 - d_param) // 4

    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    inv2 = (n + 1) // 2
    u, v, qk = 0, 2, 1  # U_0, V_0, Q^0
    for bit in bin(d)[2:]:
        u, v = (u * v) % n, (v * v - 2 * qk) % n
        qk = (qk * qk) % n
        if bit == "1":
            u, v = ((p_param * u + v) * inv2) % n, ((d_param * u + p_param * v) * inv2) % n
            qk = (qk * q_param) % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = (qk * qk) % n
    return False


def prime_verdict(x: int, rng: Optional[random.Random] = None) -> PrimalityVerdict:
    """Primality verdict with its method tag.

    Below the deterministic witness limit the answer is exact.  Above it,
    BPSW plus 64 Miller-Rabin rounds drawn from ``rng`` (seeded from x by
    default, so repeated runs agree) gives error probability well below
    2^-128 for a "prime" verdict; "composite" verdicts are always exact.
    """
    if x < 2:
        return PrimalityVerdict(False, "deterministic")
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % p == 0:
            return PrimalityVerdict(x == p, "deterministic")

    d = x - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    if x < _DET_LIMIT:
        for a in _DET_WITNESSES:
            if _mr_witness(a, d, s, x):
                return PrimalityVerdict(False, "deterministic")
        return PrimalityVerdict(True, "deterministic")

    # BPSW: strong base-2 MR + strong Lucas (after a perfect-square check).
    if _mr_witness(2, d, s, x):
        return PrimalityVerdict(False, "deterministic")
    r = math.isqrt(x)
    if r * r == x:
        return PrimalityVerdict(False, "deterministic")
    if not _strong_lucas_prp(x):
        return PrimalityVerdict(False, "deterministic")
    rng = rng if rng is not None else random.Random(x)
    for _ in range(64):
        a = rng.randrange(2, x - 1)
        if _mr_witness(a, d, s, x):
            return PrimalityVerdict(False, "deterministic")
    return PrimalityVerdict(True, "probabilistic")


def is_prime(x: int, rng: Optional[random.Random] = None) -> bool:
    return prime_verdict(x, rng).is_prime


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int) -> None:
        self.used += amount
        if self.used > self.limit:
            raise FactorBudgetError(
                f"factorization work budget exceeded ({self.limit} rho iterations)"
            )


def _brent_rho(n: int, rng: random.Random, budget: _Budget) -> int:
    """A nontrivial factor of composite odd n, by Brent's cycle method."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            budget.spend(r)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget.spend(min(m, r - k))
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                budget.spend(1)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # unlucky cycle: retry with new parameters


def _perfect_power_split(n: int) -> Optional[Tuple[int, int]]:
    """(r, k) with r^k = n and k >= 2, if n is a perfect power."""
    for k in range(2, n.bit_length() + 1):
        r = iroot(n, k)
        if r < 2:
            break
        if r ** k == n:
            return r, k
    return None


def factor(
    x: int,
    budget: int = 10 ** 8,
    rng: Optional[random.Random] = None,
) -> List[Tuple[int, int]]:
    """Complete prime factorization as (prime, multiplicity) pairs.

    Primes are strictly increasing; x = 1 yields the empty list.  Raises
    FactorBudgetError if the rho stage exceeds ``budget`` iterations.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    rng = rng if rng is not None else random.Random(x)
    tracker = _Budget(budget)
    counts: dict[int, int] = {}
    rem = x
    for p in small_primes():
        if p * p > rem:
            break
        while rem % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rem //= p
    if rem > 1:
        stack = [rem]
        while stack:
            m = stack.pop()
            if m < _TRIAL_LIMIT ** 2 or is_prime(m, rng):
                # below the trial-division square every survivor is prime
                counts[m] = counts.get(m, 0) + 1
                continue
            split = _perfect_power_split(m)
            if split is not None:
                r, k = split
                stack.extend([r] * k)
                continue
            d = _brent_rho(m, rng, tracker)
            stack.append(d)
            stack.append(m // d)
    return sorted(counts.items())


def is_squarefree(x: int, budget: int = 10 ** 8) -> bool:
    """True iff no prime divides x twice."""
    return all(mult == 1 for _, mult in factor(x, budget=budget))
