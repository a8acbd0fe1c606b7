import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jperfect.carries import (
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

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class TestDigits:
    @pytest.mark.parametrize(
        "x,p,digits",
        [
            (0, 5, ()),
            (125, 2, (1, 0, 1, 1, 1, 1, 1)),
            (7, 7, (0, 1)),
        ],
    )
    def test_examples(self, x, p, digits):
        assert to_digits(x, p).digits == digits

    def test_m_and_l(self):
        dv = to_digits(125, 2)
        assert dv.m == 6
        assert dv.l == 3

    def test_invalid_base(self):
        with pytest.raises(ValueError):
            to_digits(5, 1)

    def test_trailing_zero_rejected(self):
        with pytest.raises(ValueError):
            DigitVector(3, (1, 0))

    @given(st.integers(min_value=0, max_value=10 ** 40), st.integers(2, 100))
    def test_round_trip(self, x, p):
        assert to_digits(x, p).value() == x


class TestCarries:
    @pytest.mark.parametrize(
        "x,y,p,expected",
        [(1, 1, 2, 1), (3, 3, 2, 2), (2, 5, 3, 1)],
    )
    def test_examples(self, x, y, p, expected):
        assert carries(x, y, p) == expected

    @pytest.mark.parametrize(
        "p,n,k,expected",
        [(2, 6, 3, 2), (3, 6, 3, 0), (5, 6, 3, 1)],
    )
    def test_valuation_examples(self, p, n, k, expected):
        assert binom_valuation(p, n, k) == expected

    def test_valuation_rejects_k_gt_n(self):
        with pytest.raises(ValueError):
            binom_valuation(2, 3, 4)

    def test_kummer_vs_legendre_sample(self):
        # full range is covered by the acceptance suite
        def legendre(p, n):
            total, q = 0, p
            while q <= n:
                total += n // q
                q *= p
            return total

        for n in range(0, 120):
            for k in range(0, n + 1):
                for p in (2, 3, 5, 7):
                    expected = legendre(p, n) - legendre(p, k) - legendre(p, n - k)
                    assert binom_valuation(p, n, k) == expected


class TestRoots:
    @pytest.mark.parametrize("x,expected", [(0, 0), (15, 3), (16, 4)])
    def test_isqrt_examples(self, x, expected):
        assert isqrt(x) == expected

    @pytest.mark.parametrize(
        "x,k,expected",
        [(1, 250, 1), (127, 7, 1), (128, 7, 2), (10 ** 6, 3, 100)],
    )
    def test_iroot_examples(self, x, k, expected):
        assert iroot(x, k) == expected

    @given(st.integers(min_value=0, max_value=1 << 512))
    @settings(max_examples=500)
    def test_isqrt_sandwich(self, x):
        r = isqrt(x)
        assert r * r <= x < (r + 1) * (r + 1)

    @given(
        st.integers(min_value=0, max_value=1 << 512),
        st.integers(min_value=1, max_value=60),
    )
    @settings(max_examples=500)
    def test_iroot_sandwich(self, x, k):
        r = iroot(x, k)
        assert r ** k <= x
        assert (r + 1) ** k > x

    def test_ceil_sqrt(self):
        assert ceil_sqrt(0) == 0
        assert ceil_sqrt(16) == 4
        assert ceil_sqrt(17) == 5


class TestForcedAlpha:
    @pytest.mark.parametrize(
        "p,s,expected", [(2, 125, 7), (131, 13, 1), (5, 125, 4)]
    )
    def test_examples(self, p, s, expected):
        assert forced_alpha(p, s) == expected

    @given(st.integers(min_value=1, max_value=10 ** 30), st.sampled_from(SMALL_PRIMES))
    def test_consistency(self, s, p):
        alpha = forced_alpha(p, s)
        assert p ** (alpha - 1) <= s < p ** alpha


class TestShortInterval:
    @pytest.mark.parametrize(
        "p,w,a,expected",
        [(2, 120, 5, True), (131, 10, 3, False), (3, 120, 5, False)],
    )
    def test_examples(self, p, w, a, expected):
        assert short_interval_check(p, w, a) is expected

    @pytest.mark.parametrize(
        "p,s,expected", [(2, 125, True), (3, 13, False), (5, 124, True)]
    )
    def test_high_digit_examples(self, p, s, expected):
        assert high_digit_check(p, s) is expected

    def test_short_interval_right_endpoint(self):
        # the forced exponent always places s strictly below p^alpha
        from jperfect.carries import forced_alpha

        for p in SMALL_PRIMES:
            for w in range(3, 400, 7):
                for a in range(1, w // 2):
                    s = w + a
                    alpha = forced_alpha(p, s)
                    assert s < p ** alpha
                    if short_interval_check(p, w, a):
                        assert p ** alpha - ceil_sqrt(w) - 1 <= s
