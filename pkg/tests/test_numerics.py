import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kakeya.errors import ValidationError
from kakeya.numerics import (AlgebraicConstant, DyadicInterval, GoldenNumber,
                             GOLDEN_RATIO_ROOT, LazyReal, Ordering, PHI,
                             TRIBONACCI_ROOT, cmp_adaptive,
                             golden_compare_integers, refine)

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=64)


class TestGoldenNumber:
    def test_field_identities(self):
        assert PHI * PHI == PHI + 1
        assert PHI.inverse() == PHI - 1
        assert (PHI ** -1 + PHI ** -2) == GoldenNumber(1)
        assert (PHI ** 5) * (PHI ** -5) == GoldenNumber(1)

    def test_sign(self):
        assert PHI.sign() == 1
        assert (1 - PHI).sign() == -1
        assert GoldenNumber(0).sign() == 0
        assert (GoldenNumber(2) - PHI).sign() == 1

    @given(a=rationals, b=rationals)
    def test_sign_matches_enclosure(self, a, b):
        value = GoldenNumber(a, b)
        enclosure = value.enclosure(60)
        if value.sign() > 0:
            assert enclosure.hi > 0
        elif value.sign() < 0:
            assert enclosure.lo < 0
        else:
            assert enclosure.contains(0)

    @given(a=rationals, b=rationals, c=rationals, d=rationals)
    def test_ring_against_enclosures(self, a, b, c, d):
        x, y = GoldenNumber(a, b), GoldenNumber(c, d)
        product = (x * y).enclosure(70)
        by_parts = x.enclosure(80) * y.enclosure(80)
        assert by_parts.lo <= product.hi and product.lo <= by_parts.hi

    def test_division(self):
        x = GoldenNumber(F(3, 7), F(-2, 5))
        assert x / x == GoldenNumber(1)
        with pytest.raises(ZeroDivisionError):
            GoldenNumber(0).inverse()

    def test_order_with_rationals(self):
        assert F(3, 2) < PHI < F(13, 8)
        assert PHI > 1 and PHI < 2


class TestDyadicInterval:
    def test_from_value_outward(self):
        iv = DyadicInterval.from_value(F(1, 3), 10)
        assert iv.lo <= F(1, 3) <= iv.hi
        assert iv.width <= F(1, 2 ** 9)

    @given(a=rationals, b=rationals, c=rationals, d=rationals,
           x=st.fractions(min_value=0, max_value=1, max_denominator=97),
           y=st.fractions(min_value=0, max_value=1, max_denominator=97))
    @settings(max_examples=60)
    def test_inclusion_monotone(self, a, b, c, d, x, y):
        lo1, hi1 = min(a, b), max(a, b)
        lo2, hi2 = min(c, d), max(c, d)
        first = DyadicInterval.enclosing(lo1, hi1, 40)
        second = DyadicInterval.enclosing(lo2, hi2, 40)
        p = lo1 + x * (hi1 - lo1)
        q = lo2 + y * (hi2 - lo2)
        assert (first + second).contains(p + q)
        assert (first - second).contains(p - q)
        assert (first * second).contains(p * q)

    def test_inverse_contains(self):
        iv = DyadicInterval.enclosing(F(2, 3), F(3, 2), 30)
        inv = iv.inverse(30)
        assert inv.contains(F(3, 2) ** -1) and inv.contains(F(2, 3) ** -1)
        with pytest.raises(ValidationError):
            DyadicInterval.enclosing(-1, 1, 30).inverse(30)

    def test_pow_int(self):
        iv = DyadicInterval.enclosing(F(3, 2), F(3, 2), 40)
        assert iv.pow_int(3).contains(F(27, 8))
        assert iv.pow_int(-2).contains(F(4, 9))


class TestRefine:
    def test_golden_root(self):
        iv = refine(GOLDEN_RATIO_ROOT, 20)
        assert iv.width <= F(1, 2 ** 19)
        # containment: x^2 - x - 1 changes sign across the interval
        assert iv.lo ** 2 - iv.lo - 1 <= 0 <= iv.hi ** 2 - iv.hi - 1
        # and the interval sits at 1.6180339887...
        assert F(1618033, 10 ** 6) < iv.lo and iv.hi < F(1618035, 10 ** 6)

    def test_tribonacci_root(self):
        iv = refine(TRIBONACCI_ROOT, 30)
        assert iv.width <= F(1, 2 ** 29)
        assert iv.lo <= F(183928676, 10 ** 8) and iv.hi >= F(183928675, 10 ** 8)

    def test_linear_polynomial_hits_exact_root(self):
        constant = AlgebraicConstant((1, F(-3, 2)), 1, 2)
        iv = refine(constant, 10)
        assert iv.lo == iv.hi == F(3, 2)
        assert iv.width <= F(1, 2 ** 9)

    def test_contraction_preserves_containment(self):
        previous = refine(TRIBONACCI_ROOT, 8)
        for bits in (12, 20, 33, 50):
            narrower = refine(TRIBONACCI_ROOT, bits)
            assert previous.lo <= narrower.lo and narrower.hi <= previous.hi
            assert narrower.width <= F(1, 2 ** (bits - 1))
            previous = narrower

    def test_rejects_no_sign_change(self):
        with pytest.raises(ValidationError):
            AlgebraicConstant((1, 0, 1), 1, 2)  # x^2 + 1 has no real root


class TestCmpAdaptive:
    def test_exact_rationals(self):
        assert cmp_adaptive(F(1, 2), F(1, 3)) is Ordering.GREATER
        assert cmp_adaptive(F(1, 3), F(1, 3)) is Ordering.EQUAL_CERTIFIED

    def test_exact_golden(self):
        assert cmp_adaptive(PHI ** -1, PHI ** -2) is Ordering.GREATER
        assert cmp_adaptive(PHI ** -1 + PHI ** -2, F(1)) is Ordering.EQUAL_CERTIFIED

    def test_enclosure_escalation(self):
        target = F(183928675, 10 ** 8)
        assert cmp_adaptive(TRIBONACCI_ROOT, target, max_bits=8) is Ordering.INCONCLUSIVE
        assert cmp_adaptive(TRIBONACCI_ROOT, target, max_bits=40) is Ordering.GREATER

    def test_lazy_composition(self):
        value = LazyReal(TRIBONACCI_ROOT.enclosure) - F(1, 2)
        assert cmp_adaptive(value, F(4, 3), max_bits=128) is Ordering.GREATER
        assert cmp_adaptive(value, F(3, 2), max_bits=128) is Ordering.LESS


class TestGoldenCompareIntegers:
    def test_examples(self):
        assert golden_compare_integers(1, 2) is Ordering.GREATER
        assert golden_compare_integers(5, 8) is Ordering.LESS
        assert golden_compare_integers(13, 24) is Ordering.GREATER

    def test_agrees_with_adaptive_on_random_pairs(self):
        rng = random.Random(2024)
        for _ in range(1000):
            s = rng.randint(1, 10 ** 6)
            t = rng.randint(1, 10 ** 6)
            integer = golden_compare_integers(s, t)
            adaptive = cmp_adaptive(F(t), PHI * s, max_bits=128)
            assert integer is adaptive, (s, t)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            golden_compare_integers(0, 1)
