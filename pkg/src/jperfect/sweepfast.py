"""Compiled fast path for large parameter sweeps.

The first five cascade stages (admissibility, squarefreeness, short
interval, exponent coprimality, rough-exponent count) are pure int64
arithmetic, so they compile cleanly; anything that survives them is
handed back to the exact reference cascade in pipeline.py, which also
re-checks random samples of the fast path's verdicts.
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

__all__ = ["HAVE_NUMBA", "run_sweep_kernel", "cascade_stage15"]


def _primes_array(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=np.bool_)
    sieve[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def _sieve_limit(n_max: int) -> int:
    phi_max = 1 + (n_max * n_max) // 4 + n_max
    return int(phi_max ** 0.5) + 2


if HAVE_NUMBA:

    @njit(cache=True)
    def _isqrt64(x):
        if x < 2:
            return x
        r = np.int64(np.sqrt(x))
        while r * r > x:
            r -= 1
        while (r + 1) * (r + 1) <= x:
            r += 1
        return r

    @njit(cache=True)
    def _gcd64(a, b):
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True)
    def _cascade15(w, a, rough_required, primes):
        """First failed stage code in 1..5, or 0 if stages 1-5 all pass."""
        if not (0 < 2 * a < w):
            return 1
        s = w + a
        phi = 1 + w * s
        facs = np.empty(16, dtype=np.int64)
        nf = 0
        rem = phi
        for i in range(primes.shape[0]):
            p = primes[i]
            if p * p > rem:
                break
            if rem % p == 0:
                rem //= p
                if rem % p == 0:
                    return 2  # squarefree fails
                facs[nf] = p
                nf += 1
        if rem > 1:
            facs[nf] = rem
            nf += 1
        csw = _isqrt64(w)
        if csw * csw != w:
            csw += 1
        alphas = np.empty(16, dtype=np.int64)
        for i in range(nf):
            p = facs[i]
            pa = p
            alpha = 1
            while pa <= s:
                pa *= p
                alpha += 1
            if pa - csw - 1 > s:
                return 3  # short interval fails for p
            alphas[i] = alpha
        for i in range(nf):
            for j in range(i + 1, nf):
                if alphas[i] == alphas[j] or _gcd64(alphas[i], alphas[j]) > 1:
                    return 4  # distinct/coprime fails
        rough = 0
        for i in range(nf):
            al = alphas[i]
            if al > 1 and al % 2 != 0 and al % 3 != 0 and al % 5 != 0:
                rough += 1
        if rough < rough_required:
            return 5
        return 0

    @njit(cache=True)
    def _sweep_kernel(n_max, rough_required, primes):
        counts = np.zeros(6, dtype=np.int64)
        surv = []
        for n in range(7, n_max + 1):
            for w in range(2 * n // 5 + 1, (n - 1) // 2 + 1):
                a = n - 2 * w
                code = _cascade15(w, a, rough_required, primes)
                counts[code] += 1
                if code == 0:
                    surv.append((w, a))
        return counts, surv


def run_sweep_kernel(n_max: int, rough_required: int = 2):
    """Sweep all admissible (w, a) with n <= n_max through stages 1-5.

    Returns (counts, survivors): counts[c] is the number of pairs whose
    first failed stage has code c (0 = survived stages 1-5), survivors the
    list of surviving (w, a) pairs for the exact cascade to finish.
    """
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    primes = _primes_array(_sieve_limit(n_max))
    counts, surv = _sweep_kernel(n_max, rough_required, primes)
    return [int(c) for c in counts], [(int(w), int(a)) for w, a in surv]


def cascade_stage15(w: int, a: int, rough_required: int = 2) -> int:
    """Single-pair stage 1-5 verdict from the compiled cascade."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    n = 2 * w + a
    primes = _primes_array(_sieve_limit(n))
    return int(_cascade15(w, a, rough_required, primes))
