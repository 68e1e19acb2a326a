"""Optimality and uniqueness decisions for Kakeya expansions.

Optimality of the greedy algorithm over a strictly decreasing Kakeya
sequence is characterized by finite window identities: at every index n
either some window of following terms sums exactly to p_n (an equality
with window count k_n), or the partial sums straddle p_n strictly (a
sandwich).  Equalities at every index with nondecreasing window counts
certify that every greedy expansion minimizes the truncation error; the
smallest sandwich index yields a concrete counterexample number whose
greedy expansion is beaten by an explicit finite expansion.

The boundary case p_n = S_n (tails degenerate, e.g. base 2) fits neither
branch; it gets its own verdict rather than a claim in either direction.

Uniqueness certification runs a fixed sequence of routes, each combining
a finite certified window with a provider-level closed-form extension so
no verdict ever rests on extrapolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import KakeyaError, PrecisionExhausted, ValidationError
from .numerics import (DyadicInterval, ExactValue, GoldenNumber, LazyReal,
                       Ordering, PHI, cmp_adaptive, precision_cap)
from .sequences import (GeometricSequence, KakeyaStatus, SequenceProvider,
                        check_kakeya, simplify_exact)
from .expansion import (ALL_ONES, DigitWord, EventuallyPeriodicDigits,
                        digit_tail_value, evaluate, greedy_digits)

SEARCH_CAP = 10_000

# selectors picking every second index: digit(i) = 1 iff i is odd / even
_ODD_INDICES = EventuallyPeriodicDigits.from_parts((), (1, 0))
_EVEN_INDICES = EventuallyPeriodicDigits.from_parts((), (0, 1))


def _parity_selector(parity: int) -> EventuallyPeriodicDigits:
    return _ODD_INDICES if parity % 2 == 1 else _EVEN_INDICES


class OptimalityStatus(Enum):
    OPTIMAL_WITNESS = "optimal_witness"
    NOT_OPTIMAL = "not_optimal"
    TAIL_DEGENERATE = "tail_degenerate"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SandwichWitness:
    """Certified strict straddle: lower = sum of k terms after n is below
    p_n, upper = sum of k+1 terms is above."""

    n: int
    k: int
    lower: ExactValue | DyadicInterval
    upper: ExactValue | DyadicInterval


@dataclass(frozen=True)
class OptimalityVerdict:
    status: OptimalityStatus
    depth: int
    witness_counts: tuple[int, ...] | None = None
    sandwich: SandwichWitness | None = None
    degenerate_indices: tuple[int, ...] = ()
    inconclusive_at: int | None = None


@dataclass(frozen=True)
class CounterexampleReport:
    """A number whose greedy expansion is strictly beaten at ``position``
    by the finite expansion ``alt_digits`` (whose error there is zero)."""

    x: ExactValue
    alt_digits: DigitWord
    greedy_digits: DigitWord
    position: int
    greedy_error: ExactValue
    alt_error: ExactValue


class _Classification:
    EQUALITY = "equality"
    SANDWICH = "sandwich"
    DEGENERATE = "degenerate"
    INCONCLUSIVE = "inconclusive"


def classify_index(provider: SequenceProvider, n: int,
                   max_bits: int | None = None):
    """Classify index n: ('equality', k), ('sandwich', SandwichWitness),
    ('degenerate', None) or ('inconclusive', step).

    Scans partial sums of the terms after n until they reach p_n; the
    scan is bounded because the full tail exceeds p_n unless the index is
    degenerate, which is detected first.
    """
    cap = precision_cap(max_bits)
    term_n = provider.term(n)
    tail_n = provider.tail_value(n)
    against_tail = cmp_adaptive(term_n, tail_n, cap)
    if against_tail is Ordering.EQUAL_CERTIFIED:
        return _Classification.DEGENERATE, None
    if against_tail is Ordering.GREATER:
        raise ValidationError(f"not a Kakeya sequence: term {n} above its tail")
    if against_tail is Ordering.INCONCLUSIVE:
        return _Classification.INCONCLUSIVE, n
    partial = _zero_like(provider)
    previous: ExactValue | LazyReal = partial
    for j in range(1, SEARCH_CAP + 1):
        partial = _accumulate(partial, provider.term(n + j))
        verdict = cmp_adaptive(partial, term_n, cap)
        if verdict is Ordering.LESS:
            previous = partial
            continue
        if verdict is Ordering.EQUAL_CERTIFIED:
            if j < 2:
                raise ValidationError(
                    f"term {n + 1} equals term {n}; sequence not strictly decreasing")
            return _Classification.EQUALITY, j - 1
        if verdict is Ordering.GREATER:
            if j < 2:
                raise ValidationError(
                    f"term {n + 1} exceeds term {n}; sequence not strictly decreasing")
            witness = SandwichWitness(n=n, k=j - 1,
                                      lower=_materialize(previous),
                                      upper=_materialize(partial))
            return _Classification.SANDWICH, witness
        return _Classification.INCONCLUSIVE, n
    return _Classification.INCONCLUSIVE, n


def _zero_like(provider: SequenceProvider):
    return Fraction(0)


def _accumulate(total, term):
    if isinstance(total, LazyReal) or isinstance(term, LazyReal):
        term_lazy = term if isinstance(term, LazyReal) else LazyReal._wrap(term)
        return term_lazy + total
    return simplify_exact(GoldenNumber.coerce(total) + GoldenNumber.coerce(term))


def _materialize(value):
    if isinstance(value, LazyReal):
        return value.enclosure(64)
    return value


def _require_preconditions(provider: SequenceProvider, depth: int,
                           max_bits: int | None) -> None:
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    if not provider.strictly_decreasing():
        raise ValidationError("analysis requires a strictly decreasing sequence")
    verdict = check_kakeya(provider, depth, max_bits)
    if verdict.status is KakeyaStatus.NOT_KAKEYA:
        raise ValidationError(
            f"not a Kakeya sequence (witness index {verdict.witness})")


def check_optimality(provider: SequenceProvider, depth: int,
                     max_bits: int | None = None) -> OptimalityVerdict:
    """Decide whether every greedy expansion minimizes truncation errors.

    Every index up to ``depth`` is classified.  A sandwich anywhere makes
    the verdict NOT_OPTIMAL with the smallest such index as witness; all
    equalities with nondecreasing window counts give OPTIMAL_WITNESS;
    degenerate tails (p_n = S_n) are reported as their own verdict since
    neither direction of the characterization covers them.
    """
    _require_preconditions(provider, depth, max_bits)
    if isinstance(provider, GeometricSequence):
        # constant term ratio: every index classifies like the first
        kind, payload = classify_index(provider, 1, max_bits)
        if kind == _Classification.EQUALITY:
            return OptimalityVerdict(OptimalityStatus.OPTIMAL_WITNESS, depth,
                                     witness_counts=(payload,) * depth)
        if kind == _Classification.SANDWICH:
            return OptimalityVerdict(OptimalityStatus.NOT_OPTIMAL, depth,
                                     sandwich=payload)
        if kind == _Classification.DEGENERATE:
            return OptimalityVerdict(OptimalityStatus.TAIL_DEGENERATE, depth,
                                     degenerate_indices=tuple(range(1, depth + 1)))
        return OptimalityVerdict(OptimalityStatus.INCONCLUSIVE, depth,
                                 inconclusive_at=payload)
    counts: list[int] = []
    degenerate: list[int] = []
    for n in range(1, depth + 1):
        kind, payload = classify_index(provider, n, max_bits)
        if kind == _Classification.SANDWICH:
            return OptimalityVerdict(OptimalityStatus.NOT_OPTIMAL, depth,
                                     sandwich=payload)
        if kind == _Classification.EQUALITY:
            counts.append(payload)
        elif kind == _Classification.DEGENERATE:
            degenerate.append(n)
        else:
            return OptimalityVerdict(OptimalityStatus.INCONCLUSIVE, depth,
                                     inconclusive_at=payload)
    if degenerate:
        return OptimalityVerdict(OptimalityStatus.TAIL_DEGENERATE, depth,
                                 degenerate_indices=tuple(degenerate))
    if any(a > b for a, b in zip(counts, counts[1:])):
        # Equalities everywhere but with decreasing window counts: the
        # characterization offers no verdict on this configuration.
        return OptimalityVerdict(OptimalityStatus.INCONCLUSIVE, depth,
                                 inconclusive_at=None,
                                 witness_counts=tuple(counts))
    return OptimalityVerdict(OptimalityStatus.OPTIMAL_WITNESS, depth,
                             witness_counts=tuple(counts))


def build_counterexample(provider: SequenceProvider, witness: SandwichWitness,
                         max_bits: int | None = None) -> CounterexampleReport:
    """Turn a certified sandwich into a number without an optimal expansion.

    x is the sum of the k+1 terms after index n, so the digit word
    0^n 1^(k+1) expands x exactly with zero error at position n+1+k,
    while the greedy expansion's error there is certified positive.
    """
    if not provider.is_exact:
        raise PrecisionExhausted(witness.n,
                                 "counterexample needs exact term arithmetic")
    n, k = witness.n, witness.k
    position = n + 1 + k
    x: ExactValue = Fraction(0)
    for i in range(n + 1, position + 1):
        x = simplify_exact(GoldenNumber.coerce(x)
                           + GoldenNumber.coerce(provider.term(i)))
    alt = (0,) * n + (1,) * (k + 1)
    alt_error = GoldenNumber.coerce(x)
    for i, digit in enumerate(alt, start=1):
        if digit:
            alt_error = alt_error - GoldenNumber.coerce(provider.term(i))
    alt_error = simplify_exact(alt_error)
    if GoldenNumber.coerce(alt_error) != 0:
        raise KakeyaError("alternative digits do not reproduce the target")
    trace = greedy_digits(provider, x, position, max_bits)
    greedy_error = trace.final_remainder
    if GoldenNumber.coerce(greedy_error).sign() <= 0:
        raise KakeyaError("sandwich witness did not expose a positive greedy error")
    return CounterexampleReport(x=x, alt_digits=alt, greedy_digits=trace.digits,
                                position=position,
                                greedy_error=greedy_error,
                                alt_error=simplify_exact(alt_error))


class UniquenessStatus(Enum):
    UNIQUE_CANDIDATE = "unique_candidate"
    NO_UNIQUE = "no_unique"
    INCONCLUSIVE = "inconclusive"


class UniquenessRoute(Enum):
    GOLDEN_RATIO = "golden-ratio"
    TWO_STEP_TAIL = "two-step-tail"
    WINDOW_ONLY = "window-only"
    TAIL_OVERRUN = "tail-overrun"
    ALTERNATION = "alternation"


@dataclass(frozen=True)
class UniquenessVerdict:
    status: UniquenessStatus
    depth: int
    route: UniquenessRoute | None = None
    candidate: EventuallyPeriodicDigits | None = None
    checked_indices: tuple[int, ...] = ()
    violation_index: int | None = None
    detail: str = ""


def check_unique_candidate(provider: SequenceProvider,
                           digits: EventuallyPeriodicDigits, depth: int,
                           max_bits: int | None = None) -> UniquenessVerdict:
    """Window check of the two-sided uniqueness criterion for a candidate.

    At every index up to ``depth``: a 0 digit requires the remaining
    digit-weighted tail to stay strictly below the term, a 1 digit
    requires it to stay strictly above tail-minus-term.  Expansions
    ending in a constant tail (other than the two endpoints) are rejected
    outright; the endpoints themselves are trivially unique.
    """
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    cap = precision_cap(max_bits)
    if digits.all_zero or digits.all_one:
        return UniquenessVerdict(
            UniquenessStatus.UNIQUE_CANDIDATE, depth,
            route=UniquenessRoute.WINDOW_ONLY, candidate=digits,
            detail="endpoint expansion, trivially unique")
    if digits.ends_constant() is not None:
        return UniquenessVerdict(
            UniquenessStatus.NO_UNIQUE, depth,
            route=UniquenessRoute.WINDOW_ONLY, candidate=digits,
            detail="expansion ends in a constant tail and cannot be unique")
    checked: list[int] = []
    for n in range(1, depth + 1):
        rest = digit_tail_value(provider, digits, n)
        if digits.digit(n) == 0:
            verdict = cmp_adaptive(rest, provider.term(n), cap)
            if verdict is Ordering.INCONCLUSIVE:
                return UniquenessVerdict(UniquenessStatus.INCONCLUSIVE, depth,
                                         violation_index=n,
                                         detail="precision exhausted")
            if verdict is not Ordering.LESS:
                return UniquenessVerdict(
                    UniquenessStatus.NO_UNIQUE, depth,
                    route=UniquenessRoute.WINDOW_ONLY, candidate=digits,
                    violation_index=n,
                    detail="digit 0 but the remaining digits reach the term")
        else:
            threshold = _tail_minus_term(provider, n)
            verdict = cmp_adaptive(rest, threshold, cap)
            if verdict is Ordering.INCONCLUSIVE:
                return UniquenessVerdict(UniquenessStatus.INCONCLUSIVE, depth,
                                         violation_index=n,
                                         detail="precision exhausted")
            if verdict is not Ordering.GREATER:
                return UniquenessVerdict(
                    UniquenessStatus.NO_UNIQUE, depth,
                    route=UniquenessRoute.WINDOW_ONLY, candidate=digits,
                    violation_index=n,
                    detail="digit 1 but the remaining digits fall short")
        checked.append(n)
    return UniquenessVerdict(UniquenessStatus.UNIQUE_CANDIDATE, depth,
                             route=UniquenessRoute.WINDOW_ONLY,
                             candidate=digits,
                             checked_indices=tuple(checked))


def _tail_minus_term(provider: SequenceProvider, n: int):
    tail = provider.tail_value(n)
    term = provider.term(n)
    if isinstance(tail, LazyReal) or isinstance(term, LazyReal):
        tail_lazy = tail if isinstance(tail, LazyReal) else LazyReal._wrap(tail)
        return tail_lazy - term
    return simplify_exact(GoldenNumber.coerce(tail) - GoldenNumber.coerce(term))


def _ratio_against_golden(provider: SequenceProvider, n: int,
                          cap: int) -> Ordering:
    """Compare p_n with phi * p_{n+1}."""
    term_n = provider.term(n)
    term_next = provider.term(n + 1)
    if not isinstance(term_n, LazyReal) and not isinstance(term_next, LazyReal):
        return cmp_adaptive(GoldenNumber.coerce(term_n),
                            PHI * GoldenNumber.coerce(term_next), cap)
    lhs = term_n if isinstance(term_n, LazyReal) else LazyReal._wrap(term_n)
    rhs = LazyReal._wrap(PHI) * term_next
    return cmp_adaptive(lhs, rhs, cap)


def _two_step_tail_holds(provider: SequenceProvider, n: int,
                         cap: int) -> Ordering:
    """Compare sum_{i>=0} p_{n+2i} with p_{n-1} (strictly below is LESS)."""
    selector = _parity_selector(n)
    spaced = digit_tail_value(provider, selector, n - 1)
    return cmp_adaptive(spaced, provider.term(n - 1), cap)


def _candidate_word(zeros: int) -> EventuallyPeriodicDigits:
    return EventuallyPeriodicDigits.from_parts((0,) * zeros, (1, 0))


def _geometric_full_candidate(provider: GeometricSequence, depth: int,
                              cap: int) -> UniquenessVerdict | None:
    """For constant-ratio sequences the candidate (10)^inf satisfies the
    uniqueness criterion at every index as soon as it does at indices 1
    and 2: both sides of each condition scale by the same power of the
    ratio two indices on."""
    candidate = _candidate_word(0)
    window = check_unique_candidate(provider, candidate, 2, cap)
    if window.status is UniquenessStatus.UNIQUE_CANDIDATE:
        return UniquenessVerdict(
            UniquenessStatus.UNIQUE_CANDIDATE, depth,
            route=UniquenessRoute.GOLDEN_RATIO, candidate=candidate,
            checked_indices=(1, 2),
            detail="scale-invariant window covers every index")
    return None


def certify_uniqueness(provider: SequenceProvider, depth: int,
                       max_bits: int | None = None) -> UniquenessVerdict:
    """Decide existence of unique expansions through certified routes.

    Routes are tried in a fixed order and each one pairs a finite window
    of exact or certified checks with a provider-level closed-form
    extension; the first conclusive route wins.  With no applicable route
    the verdict is INCONCLUSIVE at the requested depth.
    """
    _require_preconditions(provider, depth, max_bits)
    cap = precision_cap(max_bits)
    ratio_cert = provider.golden_ratio_certificate()

    # (a) term ratios eventually above the golden mean, strictly often
    if ratio_cert and ratio_cert.kind == "ge" and ratio_cert.strict_infinitely_often:
        checked = []
        for n in range(ratio_cert.start, depth + 1):
            verdict = _ratio_against_golden(provider, n, cap)
            if verdict is Ordering.LESS:
                raise KakeyaError(
                    f"ratio certificate contradicted at index {n}")
            if verdict is Ordering.INCONCLUSIVE:
                return UniquenessVerdict(UniquenessStatus.INCONCLUSIVE, depth,
                                         violation_index=n,
                                         detail="precision exhausted in ratio window")
            checked.append(n)
        if isinstance(provider, GeometricSequence):
            full = _geometric_full_candidate(provider, depth, cap)
            if full is not None:
                return full
        candidate = _candidate_word(ratio_cert.start)
        return UniquenessVerdict(
            UniquenessStatus.UNIQUE_CANDIDATE, depth,
            route=UniquenessRoute.GOLDEN_RATIO, candidate=candidate,
            checked_indices=tuple(checked), detail=ratio_cert.basis)

    # (b) spaced tail sums strictly below the preceding term
    form = provider.eventual_form()
    if form is not None:
        horizon = max(depth, form.start + 3)
        holds: dict[int, bool] = {}
        conclusive = True
        for n in range(2, horizon + 1):
            verdict = _two_step_tail_holds(provider, n, cap)
            if verdict is Ordering.INCONCLUSIVE:
                conclusive = False
                break
            holds[n] = verdict is Ordering.LESS
        if conclusive:
            start = None
            for n in range(2, horizon + 1):
                if all(holds[m] for m in range(n, horizon + 1)):
                    start = n
                    break
            if start is not None and start <= depth:
                candidate = _candidate_word(start)
                return UniquenessVerdict(
                    UniquenessStatus.UNIQUE_CANDIDATE, depth,
                    route=UniquenessRoute.TWO_STEP_TAIL, candidate=candidate,
                    checked_indices=tuple(range(start, horizon + 1)),
                    detail="spaced tail bound holds from the start index on; "
                           "period structure extends it beyond the window")

    # (c) term ratios eventually at most the golden mean
    if ratio_cert and ratio_cert.kind == "le":
        checked = []
        for n in range(ratio_cert.start, depth + 1):
            verdict = _ratio_against_golden(provider, n, cap)
            if verdict is Ordering.GREATER:
                raise KakeyaError(
                    f"ratio certificate contradicted at index {n}")
            if verdict is Ordering.INCONCLUSIVE:
                return UniquenessVerdict(UniquenessStatus.INCONCLUSIVE, depth,
                                         violation_index=n,
                                         detail="precision exhausted in ratio window")
            checked.append(n)
        return UniquenessVerdict(
            UniquenessStatus.NO_UNIQUE, depth,
            route=UniquenessRoute.GOLDEN_RATIO,
            checked_indices=tuple(checked), detail=ratio_cert.basis)

    # (d) alternation: even terms dominate the odd tail, odd terms are
    # covered by the even tail, for all sufficiently large indices
    if form is not None:
        first = form.start // 2 + 1
        pairs = []
        alternation_ok = True
        for m in range(first, first + 2):
            even_idx = 2 * m
            odd_after_even = digit_tail_value(provider, _ODD_INDICES, even_idx)
            dominate = cmp_adaptive(provider.term(even_idx), odd_after_even, cap)
            odd_idx = 2 * m + 1
            even_after_odd = digit_tail_value(provider, _EVEN_INDICES, odd_idx)
            covered = cmp_adaptive(provider.term(odd_idx), even_after_odd, cap)
            if dominate in (Ordering.GREATER, Ordering.EQUAL_CERTIFIED) and \
               covered in (Ordering.LESS, Ordering.EQUAL_CERTIFIED):
                pairs.extend([even_idx, odd_idx])
            else:
                alternation_ok = False
                break
        if alternation_ok:
            return UniquenessVerdict(
                UniquenessStatus.NO_UNIQUE, depth,
                route=UniquenessRoute.ALTERNATION,
                checked_indices=tuple(pairs),
                detail="parity dominance certified beyond the preperiod; "
                       "period structure extends it to all large indices")

    # (e) the tail sum overruns the preceding term infinitely often
    overrun = provider.tail_overrun_certificate()
    if overrun is not None and provider.halving_bound():
        checked = []
        start = max(overrun.start, 3 if overrun.parity == 1 else 2)
        for n in range(start, depth + 1):
            if n % 2 != overrun.parity:
                continue
            verdict = cmp_adaptive(provider.tail_value(n),
                                   provider.term(n - 1), cap)
            if verdict is not Ordering.GREATER:
                raise KakeyaError(
                    f"tail overrun certificate contradicted at index {n}")
            checked.append(n)
        return UniquenessVerdict(
            UniquenessStatus.NO_UNIQUE, depth,
            route=UniquenessRoute.TAIL_OVERRUN,
            checked_indices=tuple(checked), detail=overrun.basis)

    return UniquenessVerdict(UniquenessStatus.INCONCLUSIVE, depth,
                             detail="no certified route applies")


def normalized_error_scale(provider: SequenceProvider, n: int,
                           bits: int = 64):
    """Display-only factor: full sum divided by the sum of the first n
    terms.

    Multiplying a depth-n truncation error by this factor normalizes it;
    the factor is common to all expansions at fixed n, so error ordering
    and every verdict are invariant under it.
    """
    if n < 1:
        raise ValidationError("depth must be at least 1")
    terms = [provider.term(i) for i in range(1, n + 1)]
    total = provider.tail_value(0)
    if isinstance(total, LazyReal) or any(isinstance(t, LazyReal) for t in terms):
        head = LazyReal._wrap(Fraction(0))
        for t in terms:
            head = head + t
        total_lazy = total if isinstance(total, LazyReal) else LazyReal._wrap(total)
        return (total_lazy * _lazy_inverse(head)).enclosure(bits)
    head_exact: ExactValue = Fraction(0)
    for t in terms:
        head_exact = simplify_exact(GoldenNumber.coerce(head_exact)
                                    + GoldenNumber.coerce(t))
    return simplify_exact(GoldenNumber.coerce(total) / GoldenNumber.coerce(head_exact))


def _lazy_inverse(value: LazyReal) -> LazyReal:
    return LazyReal(lambda bits: value.enclosure(bits + 4).inverse(bits))
