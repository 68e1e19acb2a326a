"""Kakeya-sequence providers with certified terms, tails and closed-form facts.

A provider exposes the terms p_1 > p_2 > ... of a candidate Kakeya
sequence together with everything downstream analyses need to stay
rigorous:

* exact term values where the sequence lives in Q or Q(phi), certified
  enclosures otherwise;
* tail sums S_n = sum_{i>n} p_i, exact when a closed form exists and as
  ``TailEnclosure`` records (partial sum plus a geometric ratio bound)
  when it does not;
* closed-form certificates (ratio comparisons against the golden mean,
  the halving bound p_n <= 2 p_{n+1}, tail-overrun facts) that extend
  finite window checks to all indices.  Certificates are provider-level
  mathematical facts, never extrapolations from a finite scan.

Providers are immutable after construction; term and tail computations
are pure.  The integer caches for the Fibonacci and Tribonacci numbers
grow append-only, which is safe under concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import (KakeyaError, ParseError, PrecisionExhausted,
                     RatioBoundUnavailable, ValidationError)
from .numerics import (AlgebraicConstant, DyadicInterval, ExactValue,
                       GoldenNumber, LazyReal, Ordering, PHI, Rational,
                       cmp_adaptive, golden_compare_integers, precision_cap)

TermValue = Union[Fraction, GoldenNumber, LazyReal]

_FIB = [1, 1]
_TRIB = [1, 1, 2]


def fibonacci_number(k: int) -> int:
    """F_k with F_1 = F_2 = 1."""
    if k < 1:
        raise ValidationError("Fibonacci index must be positive")
    while len(_FIB) < k:
        _FIB.append(_FIB[-1] + _FIB[-2])
    return _FIB[k - 1]


def tribonacci_number(k: int) -> int:
    """T_k with T_1 = T_2 = 1, T_3 = 2."""
    if k < 1:
        raise ValidationError("Tribonacci index must be positive")
    while len(_TRIB) < k:
        _TRIB.append(_TRIB[-1] + _TRIB[-2] + _TRIB[-3])
    return _TRIB[k - 1]


def simplify_exact(value: ExactValue) -> ExactValue:
    if isinstance(value, GoldenNumber) and value.is_rational:
        return value.as_fraction()
    return value


@dataclass(frozen=True)
class EventualForm:
    """Closed form p_i = weights[i mod len(weights)] * ratio**i for i > start.

    This is the engine behind every exact tail computation: beyond the
    finite prefix, term sums over periodic index sets reduce to geometric
    series in ``ratio`` (a rational or golden number in (0, 1)).
    """

    start: int
    ratio: ExactValue
    weights: tuple[ExactValue, ...]


@dataclass(frozen=True)
class TailEnclosure:
    """Certified enclosure of the tail sum S_n = sum_{i>n} p_i.

    ``exact`` is set when the tail has a closed form; otherwise the
    interval is [partial sum of ``terms_summed`` terms, same + geometric
    bound], where ``ratio_bound`` r < 1 certifies p_{k+1} <= r * p_k for
    every index past the summed prefix.
    """

    n: int
    interval: DyadicInterval
    exact: ExactValue | None = None
    terms_summed: int = 0
    ratio_bound: Fraction | None = None


class KakeyaStatus(Enum):
    KAKEYA = "kakeya"
    NOT_KAKEYA = "not_kakeya"
    VERIFIED_UP_TO = "verified_up_to"


@dataclass(frozen=True)
class KakeyaVerdict:
    status: KakeyaStatus
    witness: int | None = None
    depth: int | None = None
    equality_indices: tuple[int, ...] = ()
    basis: str = ""


@dataclass(frozen=True)
class GoldenRatioCertificate:
    """Provider-level fact comparing consecutive term ratios with phi.

    kind 'ge' asserts p_n >= phi * p_{n+1} for all n >= start, with
    ``strict_infinitely_often`` recording whether the inequality is
    strict at infinitely many indices; kind 'le' asserts the reverse
    bound for all n >= start.
    """

    kind: str  # 'ge' | 'le'
    start: int
    strict_infinitely_often: bool
    basis: str


@dataclass(frozen=True)
class TailOverrunCertificate:
    """Asserts S_n > p_{n-1} for every index n >= start with n % 2 == parity."""

    parity: int
    start: int
    basis: str


class SequenceProvider:
    """Base interface for Kakeya-sequence descriptions."""

    is_exact: bool = True
    has_exact_tails: bool = True

    def term(self, n: int) -> TermValue:
        raise NotImplementedError

    def eventual_form(self) -> EventualForm | None:
        return None

    def ratio_bound_from(self) -> tuple[Fraction, int] | None:
        """A certified (r, k0) with p_{k+1} <= r * p_k for all k >= k0."""
        return None

    def halving_bound(self) -> bool:
        """Whether p_n <= 2 p_{n+1} holds for every n >= 1 (closed form)."""
        return False

    def golden_ratio_certificate(self) -> GoldenRatioCertificate | None:
        return None

    def tail_overrun_certificate(self) -> TailOverrunCertificate | None:
        return None

    def kakeya_closed_form(self, depth: int) -> KakeyaVerdict | None:
        """An unconditional Kakeya verdict when one is provable."""
        return None

    def strictly_decreasing(self) -> bool:
        """Whether p_n > p_{n+1} for all n >= 1 (a global exact fact)."""
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    # -- tails ---------------------------------------------------------

    def tail_value(self, n: int) -> TermValue:
        """S_n as an exact value when closed-form, else a LazyReal."""
        if self.eventual_form() is not None:
            return simplify_exact(self._eventual_tail(n))
        return LazyReal(lambda bits: self.tail_enclosure(n, bits).interval,
                        f"S_{n}[{self.describe()}]")

    def _eventual_tail(self, n: int) -> ExactValue:
        ef = self.eventual_form()
        assert ef is not None
        m = max(n, ef.start)
        total: ExactValue = Fraction(0)
        for i in range(n + 1, m + 1):
            total = total + self.term(i)  # exact by construction
        span = len(ef.weights)
        denom = 1 - ef.ratio ** span
        for offset in range(1, span + 1):
            i0 = m + offset
            total = total + ef.weights[i0 % span] * (ef.ratio ** i0) / denom
        return total

    def tail_enclosure(self, n: int, bits: int) -> TailEnclosure:
        if n < 0:
            raise ValidationError("tail index must be nonnegative")
        if self.eventual_form() is not None:
            exact = simplify_exact(self._eventual_tail(n))
            if isinstance(exact, GoldenNumber):
                interval = exact.enclosure(bits)
            else:
                interval = DyadicInterval.from_value(exact, bits)
            return TailEnclosure(n=n, interval=interval, exact=exact)
        return self._partial_sum_enclosure(n, bits)

    def _partial_sum_enclosure(self, n: int, bits: int) -> TailEnclosure:
        bound = self.ratio_bound_from()
        if bound is None:
            raise RatioBoundUnavailable(
                f"no certified tail ratio bound for {self.describe()}")
        ratio, from_k = bound
        geometric_factor = ratio / (1 - ratio)
        target = Fraction(1, 1 << (bits - 1))
        m = max(8, from_k - n + 1)
        while True:
            partial = Fraction(0)
            for i in range(n + 1, n + m + 1):
                value = self.term(i)
                assert isinstance(value, Fraction)
                partial += value
            last = self.term(n + m)
            assert isinstance(last, Fraction)
            remainder_hi = last * geometric_factor
            upper = partial + remainder_hi
            if remainder_hi <= target * max(Fraction(1), upper):
                interval = DyadicInterval.enclosing(partial, upper, bits)
                return TailEnclosure(n=n, interval=interval, exact=None,
                                     terms_summed=m, ratio_bound=ratio)
            m *= 2


class GeometricSequence(SequenceProvider):
    """Terms p_i = q^(-i) for a base q in (1, 2].

    The base may be an exact rational, an exact element of Q(phi), or an
    algebraic constant known only through enclosures.  Bases outside
    (1, 2] require ``allow_wide`` (they violate the Kakeya property and
    exist for negative testing); q <= 1 is rejected outright because the
    series would diverge.
    """

    def __init__(self, base: Rational | GoldenNumber | AlgebraicConstant,
                 allow_wide: bool = False) -> None:
        if isinstance(base, int):
            base = Fraction(base)
        self.base = base
        if isinstance(base, Fraction):
            if base <= 1:
                raise ValidationError("geometric base must exceed 1")
            if base > 2 and not allow_wide:
                raise ValidationError(
                    f"geometric base {base} outside (1, 2]; "
                    "pass the non-Kakeya override to allow it")
        elif isinstance(base, GoldenNumber):
            if base <= 1:
                raise ValidationError("geometric base must exceed 1")
            if base > 2 and not allow_wide:
                raise ValidationError("geometric base outside (1, 2]")
        elif isinstance(base, AlgebraicConstant):
            enclosure = base.refine(precision_cap(64))
            if enclosure.hi <= 1:
                raise ValidationError("geometric base must exceed 1")
            if not allow_wide and enclosure.lo > 2:
                raise ValidationError("geometric base outside (1, 2]")
        else:
            raise ValidationError(f"unsupported geometric base type: {type(base)!r}")
        self.is_exact = not isinstance(base, AlgebraicConstant)
        self.has_exact_tails = self.is_exact

    def term(self, n: int) -> TermValue:
        if n < 1:
            raise ValidationError("term index must be positive")
        if isinstance(self.base, Fraction):
            return Fraction(1) / self.base ** n
        if isinstance(self.base, GoldenNumber):
            return self.base ** (-n)
        root = self.base
        return _lazy_inverse_power(root, n, f"q^-{n}")

    def eventual_form(self) -> EventualForm | None:
        if isinstance(self.base, Fraction):
            return EventualForm(0, Fraction(1) / self.base, (Fraction(1),))
        if isinstance(self.base, GoldenNumber):
            return EventualForm(0, self.base ** -1, (Fraction(1),))
        return None

    def tail_value(self, n: int) -> TermValue:
        if isinstance(self.base, AlgebraicConstant):
            root = self.base
            return LazyReal(lambda bits: _algebraic_tail(root, n, bits),
                            f"S_{n}[geometric]")
        return super().tail_value(n)

    def tail_enclosure(self, n: int, bits: int) -> TailEnclosure:
        if isinstance(self.base, AlgebraicConstant):
            return TailEnclosure(n=n, interval=_algebraic_tail(self.base, n, bits))
        return super().tail_enclosure(n, bits)

    def _base_vs(self, threshold: GoldenNumber | Fraction) -> Ordering:
        return cmp_adaptive(self.base, threshold)

    def halving_bound(self) -> bool:
        return self._base_vs(Fraction(2)) in (Ordering.LESS, Ordering.EQUAL_CERTIFIED)

    def golden_ratio_certificate(self) -> GoldenRatioCertificate | None:
        verdict = self._base_vs(PHI)
        if verdict is Ordering.GREATER:
            return GoldenRatioCertificate(
                kind="ge", start=1, strict_infinitely_often=True,
                basis="constant term ratio exceeds the golden mean")
        if verdict in (Ordering.LESS, Ordering.EQUAL_CERTIFIED):
            return GoldenRatioCertificate(
                kind="le", start=1, strict_infinitely_often=False,
                basis="constant term ratio at most the golden mean")
        return None

    def kakeya_closed_form(self, depth: int) -> KakeyaVerdict | None:
        verdict = self._base_vs(Fraction(2))
        if verdict is Ordering.LESS:
            return KakeyaVerdict(KakeyaStatus.KAKEYA,
                                 basis="tail q^-n/(q-1) >= q^-n since q < 2")
        if verdict is Ordering.EQUAL_CERTIFIED:
            return KakeyaVerdict(KakeyaStatus.KAKEYA,
                                 equality_indices=tuple(range(1, depth + 1)),
                                 basis="tail equals the term at every index")
        if verdict is Ordering.GREATER:
            return KakeyaVerdict(KakeyaStatus.NOT_KAKEYA, witness=1,
                                 basis="tail q^-n/(q-1) < q^-n since q > 2")
        return None

    def strictly_decreasing(self) -> bool:
        return True  # base > 1 enforced at construction

    @property
    def scale_invariant(self) -> bool:
        """Tail and term comparisons at index n reduce to index 1."""
        return True

    def describe(self) -> str:
        if isinstance(self.base, Fraction):
            return f"geometric:{self.base}"
        if isinstance(self.base, GoldenNumber):
            if self.base == PHI:
                return "geometric:phi"
            return f"geometric:{self.base.a}+{self.base.b}*phi"
        coeffs = ",".join(str(c) for c in self.base.coeffs)
        return f"geometric:poly({coeffs})"


def _lazy_inverse_power(root: AlgebraicConstant, n: int, label: str) -> LazyReal:
    def evaluate(bits: int) -> DyadicInterval:
        working = bits + 4
        cap = precision_cap(None)
        target = Fraction(1, 1 << (bits - 1))
        while True:
            enclosure = root.refine(working).pow_int(-n)
            if enclosure.width <= target or working >= cap + n + 8:
                return DyadicInterval(enclosure.lo, enclosure.hi, bits)
            working *= 2
    return LazyReal(evaluate, label)


def _algebraic_tail(root: AlgebraicConstant, n: int, bits: int) -> DyadicInterval:
    """Enclosure of q^-n / (q - 1) for an algebraic base q > 1."""
    one = DyadicInterval.from_value(1, bits + 4)
    working = bits + 4
    cap = precision_cap(None)
    target = Fraction(1, 1 << (bits - 1))
    while True:
        q = root.refine(working)
        enclosure = q.pow_int(-n) * (q - one).inverse(working)
        if enclosure.width <= target * max(Fraction(1), abs(enclosure.hi)):
            return DyadicInterval(enclosure.lo, enclosure.hi, bits)
        if working >= cap + n + 8:
            return DyadicInterval(enclosure.lo, enclosure.hi, bits)
        working *= 2


class FibonacciReciprocals(SequenceProvider):
    """Terms p_i = 1/F_{i+1} over the Fibonacci numbers F_1 = F_2 = 1.

    Terms are exact rationals; tails have no closed form and are bounded
    through the certified ratio p_{k+1}/p_k = F_{k+1}/F_{k+2} <= 2/3,
    which follows from F_{k+1} <= 2 F_k.
    """

    has_exact_tails = False

    def term(self, n: int) -> Fraction:
        if n < 1:
            raise ValidationError("term index must be positive")
        return Fraction(1, fibonacci_number(n + 1))

    def ratio_bound_from(self) -> tuple[Fraction, int]:
        return Fraction(2, 3), 1

    def halving_bound(self) -> bool:
        # F_{n+2} = F_{n+1} + F_n <= 2 F_{n+1}
        return True

    def tail_overrun_certificate(self) -> TailOverrunCertificate:
        # S_n - p_{n-1} telescopes into the alternating series
        # sum_{j>=n} (-1)^(j+1) / (F_j F_{j+1} F_{j+2}), whose terms shrink
        # strictly in magnitude, so its sign is the sign of the first term:
        # positive at odd n, negative at even n.
        return TailOverrunCertificate(
            parity=1, start=1,
            basis="alternating telescoping of the tail against the previous term")

    def kakeya_closed_form(self, depth: int) -> KakeyaVerdict:
        return KakeyaVerdict(KakeyaStatus.KAKEYA,
                             basis="halving bound p_n <= 2 p_{n+1} at every index")

    def strictly_decreasing(self) -> bool:
        return True  # F_k strictly increases from F_2 on

    def describe(self) -> str:
        return "fib"


class TribonacciReciprocals(SequenceProvider):
    """Terms p_i = 1/T_{i+1} over the Tribonacci numbers 1, 1, 2, 4, 7, ...

    The certified tail ratio is 4/7: 7 T_{k+1} <= 4 T_{k+2} reduces by the
    recurrence to 2 T_{k-2} <= 2 T_{k-1} + T_{k-3}.  The golden-ratio
    certificate rests on T_{k+1} > phi T_k for k >= 2, which holds at
    k = 2, 3 by the integer test and for k >= 4 via monotonicity:
    T_{k-1} + T_{k-2} >= 2 T_{k-3} > phi T_{k-3}.
    """

    has_exact_tails = False

    def term(self, n: int) -> Fraction:
        if n < 1:
            raise ValidationError("term index must be positive")
        return Fraction(1, tribonacci_number(n + 1))

    def ratio_bound_from(self) -> tuple[Fraction, int]:
        return Fraction(4, 7), 1

    def halving_bound(self) -> bool:
        # T_{n+2} = T_{n+1} + T_n + T_{n-1} <= 2 T_{n+1}
        return True

    def golden_ratio_certificate(self) -> GoldenRatioCertificate:
        for k in (2, 3):
            check = golden_compare_integers(tribonacci_number(k),
                                            tribonacci_number(k + 1))
            if check is not Ordering.GREATER:
                raise KakeyaError("Tribonacci base cases failed the integer test")
        return GoldenRatioCertificate(
            kind="ge", start=1, strict_infinitely_often=True,
            basis="integer test t^2 > t*s + s^2 at the base cases, "
                  "monotonicity beyond")

    def kakeya_closed_form(self, depth: int) -> KakeyaVerdict:
        return KakeyaVerdict(KakeyaStatus.KAKEYA,
                             basis="halving bound p_n <= 2 p_{n+1} at every index")

    def strictly_decreasing(self) -> bool:
        return True

    def describe(self) -> str:
        return "trib"


class PerturbationMode(Enum):
    SAME_SIGN = "same-sign"
    ALTERNATING = "alternating"


@dataclass(frozen=True)
class PerturbationSchedule:
    """Eventually constant perturbations: entry i applies to index i+1 and
    the final entry repeats forever.  Alternating mode flips the sign of
    the perturbation at odd indices."""

    mode: PerturbationMode
    epsilons: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.epsilons:
            raise ValidationError("perturbation schedule needs at least one entry")
        for eps in self.epsilons:
            if not (-1 < eps < 1):
                raise ValidationError(f"perturbation {eps} outside (-1, 1)")
        low, high = self.effective_range()
        # Ratio condition keeping the perturbed sequence Kakeya:
        # (1 + inf) / (1 + sup) >= phi - 1, decided exactly in Q(phi).
        if GoldenNumber(1 + low) < (PHI - 1) * (1 + high):
            raise ValidationError(
                f"perturbation range [{low}, {high}] breaks the Kakeya "
                "ratio condition (1+inf)/(1+sup) >= phi-1")

    def effective(self, n: int) -> Fraction:
        eps = self.epsilons[min(n, len(self.epsilons)) - 1]
        if self.mode is PerturbationMode.ALTERNATING and n % 2 == 1:
            return -eps
        return eps

    def effective_range(self) -> tuple[Fraction, Fraction]:
        values = [self.effective(n) for n in range(1, len(self.epsilons) + 1)]
        last = self.epsilons[-1]
        if self.mode is PerturbationMode.ALTERNATING:
            values.extend([last, -last])
        else:
            values.append(last)
        return min(values), max(values)

    def eventual_start(self) -> int:
        return len(self.epsilons)


class PerturbedGoldenSequence(SequenceProvider):
    """Terms p_i = phi^(-i) (1 + e_i) with an eventually constant
    perturbation schedule, all values exact in Q(phi)."""

    def __init__(self, schedule: PerturbationSchedule) -> None:
        self.schedule = schedule

    def term(self, n: int) -> GoldenNumber:
        if n < 1:
            raise ValidationError("term index must be positive")
        return (PHI ** (-n)) * (1 + self.schedule.effective(n))

    def eventual_form(self) -> EventualForm:
        start = self.schedule.eventual_start()
        last = self.schedule.epsilons[-1]
        if self.schedule.mode is PerturbationMode.ALTERNATING:
            weights = (Fraction(1) + last, Fraction(1) - last)
        else:
            weights = (Fraction(1) + last, Fraction(1) + last)
        return EventualForm(start=start, ratio=PHI ** -1, weights=weights)

    def golden_ratio_certificate(self) -> GoldenRatioCertificate | None:
        # p_n >= phi p_{n+1} iff e_n >= e_{n+1}; past the schedule the
        # differences repeat with period two, so two of them settle the
        # eventual behaviour.
        horizon = self.schedule.eventual_start() + 2
        diffs = [self.schedule.effective(n) - self.schedule.effective(n + 1)
                 for n in range(1, horizon + 1)]
        eventual = diffs[-2:]
        if all(d == 0 for d in eventual):
            start = len(diffs)
            while start > 1 and diffs[start - 2] <= 0:
                start -= 1
            return GoldenRatioCertificate(
                kind="le", start=start, strict_infinitely_often=False,
                basis="perturbations eventually constant, ratio settles at "
                      "the golden mean")
        return None

    def kakeya_closed_form(self, depth: int) -> KakeyaVerdict:
        equalities = tuple(
            n for n in range(1, depth + 1)
            if GoldenNumber.coerce(self.term(n)) == self.tail_value(n))
        return KakeyaVerdict(KakeyaStatus.KAKEYA, equality_indices=equalities,
                             basis="perturbation ratio condition validated "
                                   "at construction")

    def strictly_decreasing(self) -> bool:
        # The construction-time ratio condition forces p_n/p_{n+1} >= 1 with
        # rational perturbations, and equality would need an irrational ratio.
        return True

    def describe(self) -> str:
        eps = ",".join(str(e) for e in self.schedule.epsilons)
        return f"perturbed-phi:{self.schedule.mode.value}:{eps}"


class UserDefinedSequence(SequenceProvider):
    """Explicit positive rational terms continued geometrically.

    Past the listed prefix the sequence follows p_{m+k} = terms[-1] *
    tail_ratio^k, which keeps every tail a closed form.  Monotonicity of
    the prefix is not required here; analyses that need strict decrease
    check it explicitly.
    """

    def __init__(self, terms: list[Fraction] | tuple[Fraction, ...],
                 tail_ratio: Rational, source: str | None = None) -> None:
        if not terms:
            raise ValidationError("user-defined sequence needs at least one term")
        self.terms = tuple(Fraction(t) for t in terms)
        for t in self.terms:
            if t <= 0:
                raise ValidationError(f"terms must be strictly positive, got {t}")
        self.tail_ratio = Fraction(tail_ratio)
        if not (0 < self.tail_ratio < 1):
            raise ValidationError(
                f"tail ratio {self.tail_ratio} outside (0, 1)")
        self.source = source

    def term(self, n: int) -> Fraction:
        if n < 1:
            raise ValidationError("term index must be positive")
        m = len(self.terms)
        if n <= m:
            return self.terms[n - 1]
        return self.terms[-1] * self.tail_ratio ** (n - m)

    def eventual_form(self) -> EventualForm:
        m = len(self.terms)
        weight = self.terms[-1] / self.tail_ratio ** m
        return EventualForm(start=m, ratio=self.tail_ratio, weights=(weight,))

    def halving_bound(self) -> bool:
        values = [self.term(n) for n in range(1, len(self.terms) + 2)]
        prefix_ok = all(a <= 2 * b for a, b in zip(values, values[1:]))
        return prefix_ok and self.tail_ratio >= Fraction(1, 2)

    def golden_ratio_certificate(self) -> GoldenRatioCertificate | None:
        m = len(self.terms)
        ratios = [GoldenNumber.coerce(self.term(n)) / self.term(n + 1)
                  for n in range(1, m + 1)]
        continuation = GoldenNumber(1 / self.tail_ratio)
        above = continuation > PHI
        below = continuation < PHI
        if above:
            start = m + 1
            while start > 1 and ratios[start - 2] >= PHI:
                start -= 1
            return GoldenRatioCertificate(
                kind="ge", start=start, strict_infinitely_often=True,
                basis="geometric continuation ratio exceeds the golden mean")
        if below or continuation == PHI:
            start = m + 1
            while start > 1 and ratios[start - 2] <= PHI:
                start -= 1
            return GoldenRatioCertificate(
                kind="le", start=start, strict_infinitely_often=False,
                basis="geometric continuation ratio at most the golden mean")
        return None

    def kakeya_closed_form(self, depth: int) -> KakeyaVerdict:
        m = len(self.terms)
        equalities = []
        for n in range(1, max(depth, m) + 1):
            tail = self.tail_value(n)
            term = self.term(n)
            if term > tail:
                return KakeyaVerdict(KakeyaStatus.NOT_KAKEYA, witness=n,
                                     basis="exact prefix comparison")
            if term == tail and n <= depth:
                equalities.append(n)
        if self.tail_ratio < Fraction(1, 2):
            return KakeyaVerdict(KakeyaStatus.NOT_KAKEYA, witness=m + 1,
                                 basis="geometric continuation ratio below 1/2")
        if self.tail_ratio == Fraction(1, 2):
            equalities.extend(n for n in range(m + 1, depth + 1))
        return KakeyaVerdict(KakeyaStatus.KAKEYA,
                             equality_indices=tuple(sorted(set(equalities))),
                             basis="exact prefix comparisons and closed-form tail")

    def strictly_decreasing(self) -> bool:
        values = [self.term(n) for n in range(1, len(self.terms) + 2)]
        return all(a > b for a, b in zip(values, values[1:]))

    def describe(self) -> str:
        if self.source is not None:
            return self.source
        terms = ",".join(str(t) for t in self.terms)
        return f"user-defined:{terms};tail={self.tail_ratio}"


def tail_enclosure(provider: SequenceProvider, n: int, bits: int) -> TailEnclosure:
    """Certified enclosure of S_n for any provider; exact where closed-form."""
    return provider.tail_enclosure(n, bits)


def check_kakeya(provider: SequenceProvider, depth: int,
                 max_bits: int | None = None) -> KakeyaVerdict:
    """Decide the Kakeya property p_n <= S_n, unconditionally when the
    provider has a closed-form argument and depth-qualified otherwise.

    Raises ``PrecisionExhausted`` if an enclosure comparison stays open at
    the precision cap.
    """
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    closed = provider.kakeya_closed_form(depth)
    if closed is not None:
        return closed
    equalities = []
    for n in range(1, depth + 1):
        verdict = cmp_adaptive(provider.term(n), provider.tail_value(n), max_bits)
        if verdict is Ordering.GREATER:
            return KakeyaVerdict(KakeyaStatus.NOT_KAKEYA, witness=n,
                                 basis="certified term above tail")
        if verdict is Ordering.EQUAL_CERTIFIED:
            equalities.append(n)
        if verdict is Ordering.INCONCLUSIVE:
            raise PrecisionExhausted(n, "term against tail comparison")
    return KakeyaVerdict(KakeyaStatus.VERIFIED_UP_TO, depth=depth,
                         equality_indices=tuple(equalities),
                         basis="per-index comparisons")


def _parse_rational(text: str, position: int) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(position, f"expected a rational, got {text!r}") from exc
    return value


def parse_sequence_spec(text: str, allow_non_kakeya: bool = False) -> SequenceProvider:
    """Parse the sequence-spec grammar into a provider.

    Grammar (keywords case-insensitive)::

        spec      := "geometric:" rational | "geometric:phi"
                   | "geometric:poly(" intcoeffs ")"
                   | "fib" | "trib"
                   | "perturbed-phi:" mode ":" rationallist
                   | "file:" path
        rational  := int "/" posint | int
        mode      := "same-sign" | "alternating"

    Polynomial coefficients run from the highest degree down to the
    constant term; the base is the polynomial's root in (1, 2).
    """
    raw = text.strip()
    lowered = raw.lower()
    if lowered == "fib":
        return FibonacciReciprocals()
    if lowered == "trib":
        return TribonacciReciprocals()
    if lowered.startswith("geometric:"):
        body = raw[len("geometric:"):]
        if body.lower() == "phi":
            return GeometricSequence(PHI, allow_wide=allow_non_kakeya)
        if body.lower().startswith("poly(") and body.endswith(")"):
            inner = body[len("poly("):-1]
            try:
                coeffs = [int(c.strip()) for c in inner.split(",")]
            except ValueError as exc:
                raise ParseError(len("geometric:poly("),
                                 "polynomial coefficients must be integers") from exc
            if len(coeffs) < 2:
                raise ParseError(len("geometric:poly("),
                                 "polynomial needs degree at least 1")
            constant = _isolate_base_root(coeffs)
            return GeometricSequence(constant, allow_wide=allow_non_kakeya)
        value = _parse_rational(body, len("geometric:"))
        return GeometricSequence(value, allow_wide=allow_non_kakeya)
    if lowered.startswith("perturbed-phi:"):
        body = raw[len("perturbed-phi:"):]
        if ":" not in body:
            raise ParseError(len("perturbed-phi:"),
                             "expected mode ':' rational list")
        mode_text, eps_text = body.split(":", 1)
        try:
            mode = PerturbationMode(mode_text.strip().lower())
        except ValueError as exc:
            raise ParseError(len("perturbed-phi:"),
                             f"unknown mode {mode_text!r}") from exc
        position = len(raw) - len(eps_text)
        epsilons = tuple(_parse_rational(part, position)
                         for part in eps_text.split(","))
        return PerturbedGoldenSequence(PerturbationSchedule(mode, epsilons))
    if lowered.startswith("file:"):
        path = raw[len("file:"):]
        return load_sequence_file(path)
    raise ParseError(0, f"unrecognized sequence spec {raw!r}")


def _isolate_base_root(coeffs: list[int]) -> AlgebraicConstant | Fraction:
    from .numerics import _poly_eval  # exact rational evaluation

    tup = tuple(coeffs)
    at1 = _poly_eval(tup, Fraction(1))
    at2 = _poly_eval(tup, Fraction(2))
    if at1 == 0:
        raise ValidationError("polynomial root at 1 is not a valid base")
    if at2 == 0:
        return Fraction(2)
    if (at1 > 0) == (at2 > 0):
        raise ValidationError("polynomial has no sign change over (1, 2)")
    return AlgebraicConstant(tup, 1, 2)


def load_sequence_file(path: str) -> UserDefinedSequence:
    """Read a user-defined sequence: one rational per line, then a final
    line ``tail_ratio=<rational>``; lines starting with '#' are ignored."""
    terms: list[Fraction] = []
    tail_ratio: Fraction | None = None
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                if stripped.lower().startswith("tail_ratio="):
                    tail_ratio = _parse_rational(stripped.split("=", 1)[1], lineno)
                    continue
                if tail_ratio is not None:
                    raise ValidationError(
                        f"{path}:{lineno}: terms after tail_ratio line")
                terms.append(_parse_rational(stripped, lineno))
    except OSError as exc:
        raise ValidationError(f"cannot read sequence file {path}: {exc}") from exc
    if tail_ratio is None:
        raise ValidationError(f"{path}: missing tail_ratio line")
    return UserDefinedSequence(terms, tail_ratio, source=f"file:{path}")
