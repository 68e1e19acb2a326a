import random
from fractions import Fraction as F

import pytest

from kakeya.errors import OutOfRangeError, ParseError, PrecisionExhausted
from kakeya.numerics import GoldenNumber, Ordering, PHI, cmp_adaptive
from kakeya.sequences import (FibonacciReciprocals, GeometricSequence,
                              PerturbationMode, PerturbationSchedule,
                              PerturbedGoldenSequence, UserDefinedSequence,
                              parse_sequence_spec)
from kakeya.expansion import (EventuallyPeriodicDigits, evaluate,
                              format_digits, greedy_digits, lazy_digits,
                              parse_digits, reflect)

G2 = GeometricSequence(F(2))
FIB = FibonacciReciprocals()
GPHI = GeometricSequence(PHI)

EXACT_TAIL_PROVIDERS = [
    G2,
    GeometricSequence(F(3, 2)),
    GeometricSequence(F(19, 10)),
    GPHI,
    PerturbedGoldenSequence(
        PerturbationSchedule(PerturbationMode.ALTERNATING, (F(1, 10),))),
    UserDefinedSequence([F(1, 2), F(1, 3), F(1, 5)], F(1, 2)),
]


class TestGreedy:
    def test_binary_expansion(self):
        trace = greedy_digits(G2, F(3, 8), 4)
        assert trace.digits == (0, 1, 1, 0)
        assert trace.remainders == (F(3, 8), F(1, 8), F(0), F(0))

    def test_fibonacci_example(self):
        trace = greedy_digits(FIB, F(8, 15), 5)
        assert trace.digits == (0, 1, 0, 0, 0)
        assert trace.final_remainder == F(1, 30)

    def test_golden_tie_takes_digit(self):
        trace = greedy_digits(GPHI, 1, 3)
        assert trace.digits == (1, 1, 0)
        assert trace.remainders[1] == F(0)

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            greedy_digits(G2, F(3, 2), 3)
        with pytest.raises(OutOfRangeError):
            greedy_digits(G2, F(-1, 2), 3)

    def test_algebraic_tie_surfaces(self):
        provider = parse_sequence_spec("geometric:poly(1,-1,-1,-1)")
        with pytest.raises(PrecisionExhausted):
            greedy_digits(provider, F(1), 4, max_bits=256)

    def test_zero_digit_means_term_exceeds_remainder(self):
        rng = random.Random(5)
        for _ in range(40):
            provider = EXACT_TAIL_PROVIDERS[rng.randrange(len(EXACT_TAIL_PROVIDERS))]
            x = F(rng.randint(1, 30), 31)
            trace = greedy_digits(provider, x, 10)
            previous = GoldenNumber.coerce(x)
            for n, digit in enumerate(trace.digits, start=1):
                term = GoldenNumber.coerce(provider.term(n))
                if digit == 0:
                    assert previous < term
                previous = GoldenNumber.coerce(trace.remainders[n - 1])


class TestLazy:
    def test_binary(self):
        assert lazy_digits(G2, F(3, 8), 6).digits == (0, 1, 0, 1, 1, 1)
        assert lazy_digits(G2, F(1, 2), 4).digits == (0, 1, 1, 1)

    def test_fibonacci_lexicographic_minimum(self):
        # Exhaustive depth-4 check: 0010 is feasible for 8/15 (its remainder
        # 1/5 stays below the tail sum), so the lazy prefix is 0010.
        trace = lazy_digits(FIB, F(8, 15), 4)
        assert trace.digits == (0, 0, 1, 0)
        assert trace.final_remainder == F(1, 5)

    def test_matches_reflected_greedy(self):
        rng = random.Random(17)
        for _ in range(40):
            provider = EXACT_TAIL_PROVIDERS[rng.randrange(len(EXACT_TAIL_PROVIDERS))]
            total = GoldenNumber.coerce(provider.tail_value(0))
            x = GoldenNumber.coerce(provider.tail_value(0)) * F(rng.randint(1, 19), 20)
            lazy = lazy_digits(provider, _simplify(x), 9).digits
            mirrored = greedy_digits(provider, _simplify(total - x), 9).digits
            assert lazy == tuple(1 - d for d in mirrored)


def _simplify(value):
    if isinstance(value, GoldenNumber) and value.is_rational:
        return value.as_fraction()
    return value


class TestEvaluate:
    def test_binary_half(self):
        assert evaluate(G2, parse_digits("0(1)")) == F(1, 2)

    def test_golden_alternating_word_sums_to_one(self):
        assert evaluate(GPHI, parse_digits("(10)")) == F(1)

    def test_fibonacci_finite(self):
        assert evaluate(FIB, parse_digits("0011(0)")) == F(8, 15)

    def test_fibonacci_periodic_enclosure(self):
        enclosure = evaluate(FIB, parse_digits("(10)"), bits=40)
        # independent bound: exact partial sum of the odd-index terms plus
        # the certified remainder window [0, 2 * p_m]
        partial = sum(FIB.term(i) for i in range(1, 62, 2))
        remainder_hi = 2 * FIB.term(61)
        assert enclosure.lo <= partial + remainder_hi
        assert partial <= enclosure.hi
        assert enclosure.width <= F(1, 2 ** 36)

    def test_reconstruction(self):
        rng = random.Random(23)
        for _ in range(40):
            provider = EXACT_TAIL_PROVIDERS[rng.randrange(len(EXACT_TAIL_PROVIDERS))]
            x = GoldenNumber.coerce(provider.tail_value(0)) * F(rng.randint(1, 15), 16)
            x = _simplify(x)
            depth = rng.randint(3, 10)
            trace = greedy_digits(provider, x, depth)
            prefix = EventuallyPeriodicDigits.finite(trace.digits)
            value = evaluate(provider, prefix)
            total = GoldenNumber.coerce(value) + GoldenNumber.coerce(trace.final_remainder)
            assert total == GoldenNumber.coerce(x)


class TestRemainderBounds:
    @pytest.mark.parametrize("provider", EXACT_TAIL_PROVIDERS + [FIB],
                             ids=lambda p: p.describe())
    def test_greedy_remainders_in_window(self, provider):
        rng = random.Random(31)
        for _ in range(12):
            x = F(rng.randint(1, 40), 41)
            trace = greedy_digits(provider, x, 12)
            for n in range(1, 13):
                remainder = trace.remainders[n - 1]
                assert GoldenNumber.coerce(remainder).sign() >= 0
                tail = provider.tail_value(n)
                assert cmp_adaptive(remainder, tail, 512) is not Ordering.GREATER


class TestReflect:
    def test_examples(self):
        assert format_digits(reflect(parse_digits("0011(0)"))) == "1100(1)"
        assert format_digits(reflect(parse_digits("(10)"))) == "(01)"
        assert format_digits(reflect(parse_digits("(1)"))) == "(0)"

    def test_involution(self):
        rng = random.Random(37)
        for _ in range(50):
            pre = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 6)))
            per = tuple(rng.randint(0, 1) for _ in range(rng.randint(1, 4)))
            digits = EventuallyPeriodicDigits.from_parts(pre, per)
            assert reflect(reflect(digits)) == digits


class TestDigitFormat:
    @pytest.mark.parametrize("text", ["01000", "0011(0)", "0^3(10)",
                                      "(10)", "0^12(110)", "(0)", "(1)"])
    def test_parse_then_format_round_trip(self, text):
        digits = parse_digits(text)
        assert parse_digits(format_digits(digits)) == digits

    def test_canonicalization(self):
        assert parse_digits("0^3(10)") == parse_digits("00(01)")
        assert parse_digits("01000") == parse_digits("01(0)")
        assert parse_digits("0011(00)") == parse_digits("0011(0)")

    def test_digit_accessor(self):
        digits = parse_digits("01(10)")
        assert [digits.digit(i) for i in range(1, 7)] == [0, 1, 1, 0, 1, 0]

    def test_errors(self):
        with pytest.raises(ParseError):
            parse_digits("012")
        with pytest.raises(ParseError):
            parse_digits("01(")
        with pytest.raises(ParseError):
            parse_digits("0^")
        with pytest.raises(ParseError):
            parse_digits("")
