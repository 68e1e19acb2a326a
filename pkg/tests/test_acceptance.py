"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check here is exact arithmetic at desk scale; the stated time
budgets are asserted as hard limits.
"""

import random
import time
from fractions import Fraction as F

from kakeya.numerics import GoldenNumber, Ordering, PHI, cmp_adaptive, \
    golden_compare_integers
from kakeya.sequences import (FibonacciReciprocals, GeometricSequence,
                              KakeyaStatus, PerturbationMode,
                              PerturbationSchedule, PerturbedGoldenSequence,
                              TribonacciReciprocals, check_kakeya,
                              tribonacci_number)
from kakeya.expansion import (EventuallyPeriodicDigits, evaluate,
                              greedy_digits, lazy_digits, parse_digits,
                              reflect)
from kakeya.analysis import (OptimalityStatus, UniquenessRoute,
                             UniquenessStatus, build_counterexample,
                             certify_uniqueness, check_optimality,
                             check_unique_candidate, classify_index)
from kakeya.oracle import (enumerate_prefixes, error_envelope,
                           min_error_per_depth)


class criterion:
    """Times a criterion body, asserts its budget, prints one line."""

    def __init__(self, number: int, description: str, limit_s: float):
        self.number = number
        self.description = description
        self.limit_s = limit_s

    def __enter__(self):
        self.started = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.started
        if exc_type is None:
            print(f"PASS criterion {self.number}: {self.description} "
                  f"({elapsed:.2f}s / limit {self.limit_s:.0f}s)")
            assert elapsed < self.limit_s, (
                f"criterion {self.number} exceeded its {self.limit_s}s budget")
        else:
            print(f"FAIL criterion {self.number}: {self.description}")
        return False


def random_golden_targets(rng: random.Random, count: int) -> list[GoldenNumber]:
    """Random elements of Q(phi) strictly between 0 and phi."""
    targets = []
    while len(targets) < count:
        a = F(rng.randint(-8, 8), rng.randint(1, 8))
        b = F(rng.randint(-8, 8), rng.randint(1, 8))
        x = GoldenNumber(a, b)
        if GoldenNumber(0) < x < PHI:
            targets.append(x)
    return targets


def test_criterion_1_fibonacci_non_optimality():
    with criterion(1, "Fibonacci greedy error 1/30 vs exact expansion", 1.0):
        fib = FibonacciReciprocals()
        trace = greedy_digits(fib, F(8, 15), 5)
        assert trace.digits == (0, 1, 0, 0, 0)
        assert trace.final_remainder == F(1, 30)
        alternative = parse_digits("00110")
        value = evaluate(fib, alternative)
        assert value == F(8, 15)
        remainder = F(8, 15) - sum(
            fib.term(i) for i in range(1, 6) if alternative.digit(i))
        assert remainder == 0


def test_criterion_2_golden_ratio_optimality():
    with criterion(2, "golden-base optimality witness and oracle minima", 10.0):
        gphi = GeometricSequence(PHI)
        verdict = check_optimality(gphi, 50)
        assert verdict.status is OptimalityStatus.OPTIMAL_WITNESS
        assert verdict.witness_counts == (1,) * 50
        rng = random.Random(20260809)
        for x in random_golden_targets(rng, 20):
            greedy = greedy_digits(gphi, x, 10)
            minima = min_error_per_depth(gphi, x, 10)
            for level, remainder in zip(minima, greedy.remainders):
                assert GoldenNumber.coerce(level.value) == \
                    GoldenNumber.coerce(remainder)


def test_criterion_3_only_if_counterexample():
    with criterion(3, "Fibonacci sandwich at n=1, k=2 and validated "
                      "counterexample", 1.0):
        fib = FibonacciReciprocals()
        verdict = check_optimality(fib, 10)
        assert verdict.status is OptimalityStatus.NOT_OPTIMAL
        witness = verdict.sandwich
        assert (witness.n, witness.k) == (1, 2)
        assert witness.lower == F(5, 6)
        assert witness.upper == F(31, 30)
        report = build_counterexample(fib, witness)
        prefixes = enumerate_prefixes(fib, report.x, report.position)
        assert report.alt_digits in prefixes
        assert report.greedy_digits in prefixes
        minima = min_error_per_depth(fib, report.x, report.position)
        assert minima[report.position - 1].value == 0
        assert report.greedy_error > 0


def test_criterion_4_error_envelope():
    with criterion(4, "greedy/lazy envelope contains all oracle errors", 30.0):
        gphi = GeometricSequence(PHI)
        rng = random.Random(4096)
        for x in random_golden_targets(rng, 20):
            report = error_envelope(gphi, x, 10)
            assert report.all_contained
            assert all(level.certified for level in report.levels)


def test_criterion_5_uniqueness_thresholds():
    with criterion(5, "geometric uniqueness threshold at the golden mean", 5.0):
        above = certify_uniqueness(GeometricSequence(F(19, 10)), 40)
        assert above.status is UniquenessStatus.UNIQUE_CANDIDATE
        assert above.candidate == parse_digits("(10)")
        window = check_unique_candidate(GeometricSequence(F(19, 10)),
                                        above.candidate, 40)
        assert window.status is UniquenessStatus.UNIQUE_CANDIDATE
        assert window.checked_indices == tuple(range(1, 41))
        below = certify_uniqueness(GeometricSequence(F(3, 2)), 40)
        assert below.status is UniquenessStatus.NO_UNIQUE


def test_criterion_6_tribonacci_uniqueness():
    with criterion(6, "Tribonacci integer ratio tests and unique candidate", 1.0):
        for n in range(3, 65):
            check = golden_compare_integers(tribonacci_number(n + 1),
                                            tribonacci_number(n + 2))
            assert check is Ordering.GREATER
        verdict = certify_uniqueness(TribonacciReciprocals(), 40)
        assert verdict.status is UniquenessStatus.UNIQUE_CANDIDATE
        assert verdict.route is UniquenessRoute.GOLDEN_RATIO
        assert verdict.candidate == EventuallyPeriodicDigits.from_parts(
            (0,), (1, 0))


def test_criterion_7_alternation_non_uniqueness():
    with criterion(7, "alternating perturbation has no unique expansions", 5.0):
        schedule = PerturbationSchedule(PerturbationMode.ALTERNATING,
                                        (F(1, 10),))
        low, high = schedule.effective_range()
        assert (low, high) == (F(-1, 10), F(1, 10))
        assert F(1 + low, 1 + high) == F(9, 11)
        assert GoldenNumber(F(9, 11)) >= PHI - 1  # exact in Q(phi)
        provider = PerturbedGoldenSequence(schedule)
        verdict = certify_uniqueness(provider, 30)
        assert verdict.status is UniquenessStatus.NO_UNIQUE
        assert verdict.route is UniquenessRoute.ALTERNATION


def test_criterion_8_property_suites():
    with criterion(8, "randomized property suites, 100+ cases each", 60.0):
        rng = random.Random(271828)
        exact_tail = [GeometricSequence(F(2)), GeometricSequence(F(3, 2)),
                      GeometricSequence(F(19, 10)), GeometricSequence(PHI),
                      PerturbedGoldenSequence(PerturbationSchedule(
                          PerturbationMode.ALTERNATING, (F(1, 10),)))]
        fib = FibonacciReciprocals()
        oracle_specs = exact_tail[:4] + [fib]

        # greedy is the lexicographic maximum, lazy the minimum
        for case in range(100):
            provider = oracle_specs[case % len(oracle_specs)]
            x = F(rng.randint(1, 40), 41)
            words = enumerate_prefixes(provider, x, 8).words()
            assert greedy_digits(provider, x, 8).digits == max(words)
            assert lazy_digits(provider, x, 8).digits == min(words)

        # remainders stay inside [0, S_n]
        for case in range(100):
            provider = oracle_specs[case % len(oracle_specs)]
            x = F(rng.randint(1, 60), 61)
            trace = greedy_digits(provider, x, 10)
            for n in range(1, 11):
                remainder = trace.remainders[n - 1]
                assert GoldenNumber.coerce(remainder).sign() >= 0
                assert cmp_adaptive(remainder, provider.tail_value(n),
                                    512) is not Ordering.GREATER

        # lazy digits mirror the greedy digits of the reflected target
        for case in range(100):
            provider = exact_tail[case % len(exact_tail)]
            total = GoldenNumber.coerce(provider.tail_value(0))
            x = total * F(rng.randint(1, 29), 30)
            mirrored = total - x
            lazy = lazy_digits(provider, _plain(x), 9).digits
            greedy = greedy_digits(provider, _plain(mirrored), 9).digits
            assert lazy == tuple(1 - d for d in greedy)

        # expansions ending in a constant tail are rejected
        rejected = 0
        while rejected < 100:
            length = rng.randint(1, 10)
            word = [rng.randint(0, 1) for _ in range(length)]
            word[rng.randrange(length)] = 1
            if rng.random() < 0.5:
                digits = EventuallyPeriodicDigits.from_parts(word, (0,))
            else:
                digits = EventuallyPeriodicDigits.from_parts(word, (1,))
            if digits.all_zero or digits.all_one:
                continue
            verdict = check_unique_candidate(fib, digits, 6)
            assert verdict.status is UniquenessStatus.NO_UNIQUE
            assert "constant tail" in verdict.detail
            rejected += 1

        # Kakeya dichotomy for geometric bases: holds iff q <= 2
        checked = 0
        while checked < 100:
            denominator = rng.randint(2, 48)
            numerator = rng.randint(denominator + 1, (5 * denominator) // 2)
            q = F(numerator, denominator)
            if q > F(5, 2):
                continue
            verdict = check_kakeya(GeometricSequence(q, allow_wide=True), 6)
            expected = KakeyaStatus.KAKEYA if q <= 2 else KakeyaStatus.NOT_KAKEYA
            assert verdict.status is expected, q
            checked += 1


def _plain(value: GoldenNumber):
    if value.is_rational:
        return value.as_fraction()
    return value
