import itertools
import random
from fractions import Fraction as F

import pytest

from kakeya.errors import DepthTooLarge
from kakeya.numerics import GoldenNumber, PHI
from kakeya.sequences import (FibonacciReciprocals, GeometricSequence,
                              parse_sequence_spec)
from kakeya.expansion import evaluate, greedy_digits, lazy_digits, parse_digits
from kakeya.oracle import (branching_positions, count_branchings,
                           enumerate_prefixes, error_envelope,
                           min_error_per_depth)

G2 = GeometricSequence(F(2))
G32 = GeometricSequence(F(3, 2))
G1910 = GeometricSequence(F(19, 10))
GPHI = GeometricSequence(PHI)
FIB = FibonacciReciprocals()


def brute_force_words(provider, x, depth):
    tail = GoldenNumber.coerce(provider.tail_value(depth))
    feasible = set()
    for word in itertools.product((0, 1), repeat=depth):
        remainder = GoldenNumber.coerce(x)
        for i, digit in enumerate(word, start=1):
            if digit:
                remainder = remainder - GoldenNumber.coerce(provider.term(i))
        if GoldenNumber(0) <= remainder <= tail:
            feasible.add(word)
    return feasible


class TestEnumerate:
    def test_binary_half(self):
        prefixes = enumerate_prefixes(G2, F(1, 2), 3)
        assert set(prefixes.words()) == {(1, 0, 0), (0, 1, 1)}

    def test_binary_three_eighths(self):
        prefixes = enumerate_prefixes(G2, F(3, 8), 2)
        assert set(prefixes.words()) == {(0, 1)}

    def test_fibonacci_contains_both_expansions(self):
        prefixes = enumerate_prefixes(FIB, F(8, 15), 4)
        assert (0, 1, 0, 0) in prefixes
        assert (0, 0, 1, 1) in prefixes

    def test_depth_guard(self):
        with pytest.raises(DepthTooLarge):
            enumerate_prefixes(G2, F(1, 2), 25)
        enumerate_prefixes(G2, F(1, 2), 25, allow_deep=True)

    @pytest.mark.parametrize("provider,x", [
        (G2, F(5, 16)), (G32, F(1, 3)), (G1910, F(7, 10)),
    ], ids=["base2", "base3/2", "base19/10"])
    def test_completeness_against_brute_force(self, provider, x):
        for depth in (4, 7, 10):
            got = set(enumerate_prefixes(provider, x, depth).words())
            assert got == brute_force_words(provider, x, depth)

    def test_results_sorted(self):
        words = enumerate_prefixes(G32, F(1, 3), 8).words()
        assert list(words) == sorted(words)


class TestExtremality:
    @pytest.mark.parametrize("provider", [G2, G32, G1910, GPHI, FIB],
                             ids=lambda p: p.describe())
    def test_greedy_max_lazy_min(self, provider):
        rng = random.Random(41)
        for _ in range(10):
            x = F(rng.randint(1, 24), 25)
            words = enumerate_prefixes(provider, x, 9).words()
            assert greedy_digits(provider, x, 9).digits == max(words)
            assert lazy_digits(provider, x, 9).digits == min(words)


class TestMinErrors:
    def test_golden_target_one(self):
        minima = min_error_per_depth(GPHI, GoldenNumber(1), 5)
        greedy = greedy_digits(GPHI, GoldenNumber(1), 5)
        for level, remainder in zip(minima, greedy.remainders):
            assert GoldenNumber.coerce(level.value) == GoldenNumber.coerce(remainder)

    def test_fibonacci_beats_greedy(self):
        minima = min_error_per_depth(FIB, F(8, 15), 5)
        assert minima[4].value == 0  # achieved by 00110
        greedy = greedy_digits(FIB, F(8, 15), 5)
        assert greedy.final_remainder == F(1, 30)

    def test_binary(self):
        values = [m.value for m in min_error_per_depth(G2, F(3, 8), 3)]
        assert values == [F(3, 8), F(1, 8), F(0)]


class TestEnvelope:
    def test_golden_contained(self):
        report = error_envelope(GPHI, GoldenNumber(1), 8)
        assert report.all_contained

    def test_binary_example(self):
        report = error_envelope(G2, F(3, 8), 3)
        level = report.levels[2]
        assert level.greedy_error == 0 and level.lazy_error == F(1, 8)
        observed = {GoldenNumber.coerce(e).as_fraction()
                    for e in level.observed_errors}
        assert observed == {F(0), F(1, 8)}
        assert report.all_contained

    def test_informational_for_unwitnessed_base(self):
        report = error_envelope(G1910, F(1, 2), 10)
        assert report.depth == 10
        assert all(len(level.observed_errors) >= 1 for level in report.levels)


class TestBranchings:
    def test_binary_single_branch(self):
        assert count_branchings(G2, F(1, 2), 6) == 1
        assert branching_positions(G2, F(1, 2), 6) == [1]

    def test_redundant_base(self):
        positions = branching_positions(G32, F(1), 10)
        # exhaustive: branchings at position 1 and at every position from 3 on
        assert sorted(set(positions)) == [1, 3, 4, 5, 6, 7, 8, 9, 10]

    def test_unique_value_never_branches(self):
        x = evaluate(G1910, parse_digits("(10)"))
        assert count_branchings(G1910, x, 12) == 0


class TestOverApproximation:
    def test_higher_precision_never_adds_prefixes(self):
        provider = parse_sequence_spec("geometric:poly(1,-1,-1,-1)")
        coarse = set(enumerate_prefixes(provider, F(1, 2), 8,
                                        max_bits=64).words())
        fine = set(enumerate_prefixes(provider, F(1, 2), 8,
                                      max_bits=512).words())
        assert fine <= coarse
