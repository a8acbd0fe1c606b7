import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jperfect.egyptian import (
    AlphaSet,
    RationalInterval,
    alpha_window,
    enumerate_sets,
    is_seven_rough,
    min_prime_factor,
    parse_decimal,
    reciprocal_sum,
)


class TestAlphaSet:
    def test_of_sorts(self):
        s = AlphaSet.of([7, 2, 3])
        assert s.values == (2, 3, 7)
        assert s.r == 3

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            AlphaSet.of([2, 2, 3])

    def test_coprime(self):
        assert AlphaSet.of([2, 3, 7]).is_pairwise_coprime()
        assert not AlphaSet.of([2, 3, 6]).is_pairwise_coprime()
        with pytest.raises(ValueError):
            AlphaSet.of([2, 4], require_coprime=True)

    def test_rough_count(self):
        assert AlphaSet.of([1, 2, 3, 7, 41]).rough_count() == 2  # 7 and 41


class TestReciprocalSum:
    def test_examples(self):
        assert reciprocal_sum([1, 2, 3, 5]) == Fraction(61, 30)
        assert reciprocal_sum([1, 2, 3, 25]) == Fraction(281, 150)
        assert reciprocal_sum(AlphaSet.of([2, 3])) == Fraction(5, 6)
        assert reciprocal_sum([]) == 0

    @given(st.lists(st.integers(1, 500), min_size=0, max_size=8))
    def test_matches_fraction_sum(self, values):
        assert reciprocal_sum(values) == sum(
            (Fraction(1, v) for v in values), Fraction(0)
        )


class TestRoughness:
    @pytest.mark.parametrize(
        "k,expected",
        [(1, None), (2, 2), (49, 7), (77, 7), (97, 97), (91, 7)],
    )
    def test_min_prime_factor(self, k, expected):
        assert min_prime_factor(k) == expected

    @given(st.integers(1, 10 ** 6))
    def test_seven_rough_consistent(self, k):
        mpf = min_prime_factor(k)
        assert is_seven_rough(k) is (mpf is not None and mpf >= 7)


class TestRationalInterval:
    def test_containment(self):
        w = RationalInterval(Fraction(199, 100), Fraction(2001, 1000))
        assert Fraction(2) in w
        assert Fraction(199, 100) in w
        assert Fraction(3) not in w
        assert w.contains_interval(RationalInterval(Fraction(2), Fraction(2)))
        assert not w.contains_interval(RationalInterval(Fraction(1), Fraction(2)))

    def test_rejects_inverted(self):
        with pytest.raises(ValueError):
            RationalInterval(Fraction(2), Fraction(1))

    def test_parse_decimal(self):
        assert parse_decimal("1.99") == Fraction(199, 100)
        assert parse_decimal("2.001") == Fraction(2001, 1000)


def _brute_sets(max_terms, window, cap, require_coprime, min_rough):
    found = []
    for r in range(1, max_terms + 1):
        for combo in itertools.combinations(range(1, cap + 1), r):
            if reciprocal_sum(combo) not in window:
                continue
            if require_coprime and any(
                math.gcd(x, y) > 1 for x, y in itertools.combinations(combo, 2)
            ):
                continue
            if sum(1 for v in combo if is_seven_rough(v)) < min_rough:
                continue
            found.append(combo)
    return sorted(found)


class TestEnumerateSets:
    def test_ten_five_term_sets(self):
        window = RationalInterval(Fraction(199, 100), Fraction(2001, 1000))
        sets = enumerate_sets(5, window, 100)
        assert [s.values for s in sets] == [
            (1, 2, 3, 7, k)
            for k in (41, 43, 47, 53, 55, 59, 61, 65, 67, 71)
        ]

    def test_four_term_prime_power_max(self):
        # 4-term sets {1, 2^a, 3^b, 5^c} whose sum stays below the window
        # top: the largest achievable sum swaps 5 for 25
        cap = Fraction(2026, 1000)
        best = Fraction(0)
        argbest = None
        for a in range(1, 12):
            for b in range(1, 8):
                for c in range(1, 6):
                    total = reciprocal_sum([1, 2 ** a, 3 ** b, 5 ** c])
                    if total <= cap and total > best:
                        best, argbest = total, (1, 2 ** a, 3 ** b, 5 ** c)
        assert best == Fraction(281, 150)
        assert argbest == (1, 2, 3, 25)

    def test_no_four_term_near_two(self):
        window = RationalInterval(Fraction(199, 100), Fraction(2001, 1000))
        assert enumerate_sets(4, window, 1000, min_rough_count=2) == []

    @pytest.mark.parametrize("require_coprime", [True, False])
    @pytest.mark.parametrize("min_rough", [0, 1])
    def test_matches_brute_force(self, require_coprime, min_rough):
        window = RationalInterval(Fraction(6, 5), Fraction(19, 10))
        cap = 30
        fast = enumerate_sets(
            4, window, cap, require_coprime=require_coprime,
            min_rough_count=min_rough,
        )
        assert [s.values for s in fast] == _brute_sets(
            4, window, cap, require_coprime, min_rough
        )

    def test_singletons(self):
        window = RationalInterval(Fraction(1, 4), Fraction(1, 2))
        sets = enumerate_sets(1, window, 10)
        assert [s.values for s in sets] == [(2,), (3,), (4,)]


class TestAlphaWindow:
    def test_reference_points(self):
        w = alpha_window(50000)
        assert w.lo == Fraction(193, 100)
        assert w.hi == Fraction(203, 100)
        w2 = alpha_window(1 << 109)
        assert w2.lo == Fraction(199, 100)
        assert w2.hi == Fraction(201, 100)

    def test_rejects_tiny(self):
        with pytest.raises(ValueError):
            alpha_window(9)

    def test_monotone_refinement(self):
        prev = alpha_window(10)
        for bits in range(4, 130, 6):
            cur = alpha_window(1 << bits)
            assert prev.contains_interval(cur)
            prev = cur

    def test_always_contains_two(self):
        for n_min in (10, 100, 50000, 1 << 64, 1 << 200):
            assert Fraction(2) in alpha_window(n_min)
