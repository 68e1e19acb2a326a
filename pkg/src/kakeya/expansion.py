"""Digit sequences and the greedy and lazy expansion engines.

A finite digit word is a plain tuple over {0, 1}.  Infinite, eventually
periodic digit sequences are ``EventuallyPeriodicDigits`` values kept in
canonical form: primitive period, shortest preperiod, and the all-zero
period for finite expansions.

The greedy rule takes digit 1 exactly when the term still fits under the
running remainder (ties take 1); the lazy rule takes digit 0 exactly when
the whole remaining tail can still cover the remainder (ties take 0).
Both run on exact field arithmetic whenever the sequence allows it and
escalate enclosure precision otherwise, surfacing ``PrecisionExhausted``
instead of guessing a tie.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Union

from .errors import (OutOfRangeError, ParseError, PrecisionExhausted,
                     ValidationError)
from .numerics import (DyadicInterval, ExactValue, GoldenNumber, LazyReal,
                       Ordering, Rational, cmp_adaptive, precision_cap)
from .sequences import SequenceProvider, simplify_exact

DigitWord = tuple[int, ...]
Value = Union[Fraction, GoldenNumber, DyadicInterval]


def as_digit_word(digits) -> DigitWord:
    word = tuple(int(d) for d in digits)
    if any(d not in (0, 1) for d in word):
        raise ValidationError(f"digits must be 0 or 1, got {digits!r}")
    return word


def _canonical_parts(preperiod, period) -> tuple[DigitWord, DigitWord]:
    """Primitive period, minimal preperiod."""
    pre = list(as_digit_word(preperiod))
    per = list(as_digit_word(period))
    if not per:
        per = [0]
    length = len(per)
    for d in range(1, length + 1):
        if length % d == 0 and per == per[:d] * (length // d):
            per = per[:d]
            break
    # absorb the preperiod tail into the period by rotation
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = [per[-1]] + per[:-1]
    return tuple(pre), tuple(per)


@dataclass(frozen=True)
class EventuallyPeriodicDigits:
    """Digit sequence preperiod + period repeated forever.

    Instances are always canonical: the period is primitive, the
    preperiod is minimal, and finite expansions carry the all-zero
    period.  Construction canonicalizes, so equality is equality of the
    digit sequences themselves.
    """

    preperiod: DigitWord
    period: DigitWord

    def __post_init__(self) -> None:
        pre, per = _canonical_parts(self.preperiod, self.period)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def from_parts(cls, preperiod, period) -> EventuallyPeriodicDigits:
        return cls(tuple(as_digit_word(preperiod)), tuple(as_digit_word(period)))

    @classmethod
    def finite(cls, digits) -> EventuallyPeriodicDigits:
        return cls.from_parts(digits, (0,))

    def digit(self, i: int) -> int:
        """1-based digit accessor."""
        if i < 1:
            raise ValidationError("digit index must be positive")
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        return self.period[(i - len(self.preperiod) - 1) % len(self.period)]

    def prefix(self, depth: int) -> DigitWord:
        return tuple(self.digit(i) for i in range(1, depth + 1))

    @property
    def is_finite(self) -> bool:
        return self.period == (0,)

    @property
    def all_zero(self) -> bool:
        return self.period == (0,) and not any(self.preperiod)

    @property
    def all_one(self) -> bool:
        return self.period == (1,) and all(self.preperiod)

    def ends_constant(self) -> int | None:
        """The eventual constant digit, if the tail is (0)^inf or (1)^inf."""
        if self.period == (0,):
            return 0
        if self.period == (1,):
            return 1
        return None

    def __str__(self) -> str:
        return format_digits(self)


ALL_ONES = EventuallyPeriodicDigits.from_parts((), (1,))
ALL_ZEROS = EventuallyPeriodicDigits.from_parts((), (0,))


def reflect(digits: EventuallyPeriodicDigits) -> EventuallyPeriodicDigits:
    """Digitwise complement, canonicalized."""
    return EventuallyPeriodicDigits.from_parts(
        tuple(1 - d for d in digits.preperiod),
        tuple(1 - d for d in digits.period))


_RUN_THRESHOLD = 4


def _compress_runs(word: DigitWord) -> str:
    parts: list[str] = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        if run >= _RUN_THRESHOLD:
            parts.append(f"{word[i]}^{run}")
        else:
            parts.append(str(word[i]) * run)
        i = j
    return "".join(parts)


def format_digits(digits: EventuallyPeriodicDigits | DigitWord) -> str:
    """Render digits in the text format, e.g. "01000", "0011(0)", "0^3(10)".

    Finite words print bare.  Parsing the output reproduces the input on
    canonical forms.
    """
    if isinstance(digits, EventuallyPeriodicDigits):
        if digits.is_finite:
            body = _compress_runs(digits.preperiod)
            return body + "(0)" if digits.preperiod else "(0)"
        return _compress_runs(digits.preperiod) + f"({_compress_runs(digits.period)})"
    return _compress_runs(as_digit_word(digits)) or ""


def _parse_plain_word(text: str, offset: int) -> list[int]:
    digits: list[int] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch not in "01":
            raise ParseError(offset + i, f"expected digit, got {ch!r}")
        if i + 1 < len(text) and text[i + 1] == "^":
            j = i + 2
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 2:
                raise ParseError(offset + i + 2, "expected repetition count")
            digits.extend([int(ch)] * int(text[i + 2:j]))
            i = j
        else:
            digits.append(int(ch))
            i += 1
    return digits


def parse_digits(text: str) -> EventuallyPeriodicDigits:
    """Parse the digit-word format; a bare word denotes a finite expansion."""
    text = text.strip()
    if not text:
        raise ParseError(0, "empty digit word")
    if "(" in text:
        open_at = text.index("(")
        if not text.endswith(")"):
            raise ParseError(len(text), "expected ')' at end")
        pre = _parse_plain_word(text[:open_at], 0)
        per = _parse_plain_word(text[open_at + 1:-1], open_at + 1)
        if not per:
            raise ParseError(open_at + 1, "period must be nonempty")
        return EventuallyPeriodicDigits.from_parts(pre, per)
    return EventuallyPeriodicDigits.finite(_parse_plain_word(text, 0))


@dataclass(frozen=True)
class ExpansionTrace:
    """Digits c_1..c_D with the remainder after each step.

    ``remainders[k]`` is x - sum_{i<=k+1} c_i p_i, so the final entry is
    the depth-D truncation error.  Remainders are exact for exact
    sequences and enclosures otherwise.
    """

    digits: DigitWord
    remainders: tuple[Value, ...]

    @property
    def depth(self) -> int:
        return len(self.digits)

    @property
    def final_remainder(self) -> Value:
        return self.remainders[-1]


def _coerce_target(x: Rational | GoldenNumber) -> ExactValue:
    if isinstance(x, GoldenNumber):
        return x
    return Fraction(x)


def _check_range(provider: SequenceProvider, x: ExactValue,
                 max_bits: int | None) -> None:
    if (isinstance(x, Fraction) and x < 0) or \
       (isinstance(x, GoldenNumber) and x.sign() < 0):
        raise OutOfRangeError(x, "below")
    total = provider.tail_value(0)
    verdict = cmp_adaptive(x, total, max_bits)
    if verdict is Ordering.GREATER:
        raise OutOfRangeError(x, "above")
    if verdict is Ordering.INCONCLUSIVE:
        raise PrecisionExhausted(0, "range check against the full sum")


def greedy_digits(provider: SequenceProvider, x: Rational | GoldenNumber,
                  depth: int, max_bits: int | None = None) -> ExpansionTrace:
    """Lexicographically greatest expansion prefix of x.

    Digit n is 1 exactly when p_n plus the digits taken so far still fits
    under x; an exact tie takes the digit.  For sequences known only
    through enclosures a tie cannot be certified and surfaces
    ``PrecisionExhausted``.
    """
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    x = _coerce_target(x)
    _check_range(provider, x, max_bits)
    if provider.is_exact:
        return _greedy_exact(provider, x, depth)
    return _greedy_enclosure(provider, x, depth, max_bits)


def _greedy_exact(provider: SequenceProvider, x: ExactValue,
                  depth: int) -> ExpansionTrace:
    digits: list[int] = []
    remainders: list[Value] = []
    remainder: ExactValue = x
    for n in range(1, depth + 1):
        term = provider.term(n)
        assert not isinstance(term, LazyReal)
        if GoldenNumber.coerce(term) <= GoldenNumber.coerce(remainder):
            digits.append(1)
            remainder = simplify_exact(
                GoldenNumber.coerce(remainder) - GoldenNumber.coerce(term))
        else:
            digits.append(0)
        remainders.append(remainder)
    return ExpansionTrace(tuple(digits), tuple(remainders))


_TRACE_DISPLAY_BITS = 64


def _greedy_enclosure(provider: SequenceProvider, x: ExactValue, depth: int,
                      max_bits: int | None) -> ExpansionTrace:
    digits: list[int] = []
    chosen: list[TermValueLazy] = []
    remainders: list[Value] = []
    cap = precision_cap(max_bits)
    for n in range(1, depth + 1):
        term = provider.term(n)
        committed = _lazy_sum([*chosen, term])
        verdict = cmp_adaptive(committed, x, cap)
        if verdict is Ordering.INCONCLUSIVE:
            raise PrecisionExhausted(n, "greedy digit comparison")
        if verdict in (Ordering.LESS, Ordering.EQUAL_CERTIFIED):
            digits.append(1)
            chosen.append(term)
        else:
            digits.append(0)
        remainder = _lazy_difference(x, chosen)
        remainders.append(remainder.enclosure(_TRACE_DISPLAY_BITS))
    return ExpansionTrace(tuple(digits), tuple(remainders))


TermValueLazy = Union[Fraction, GoldenNumber, LazyReal]


def _lazy_sum(values: list[TermValueLazy]) -> TermValueLazy:
    if all(not isinstance(v, LazyReal) for v in values):
        acc: ExactValue = Fraction(0)
        for v in values:
            acc = acc + v  # type: ignore[operator]
        return simplify_exact(GoldenNumber.coerce(acc))
    total: TermValueLazy = Fraction(0)
    for v in values:
        if isinstance(total, LazyReal) or isinstance(v, LazyReal):
            lazy_v = v if isinstance(v, LazyReal) else LazyReal._wrap(v)
            total = lazy_v + total
        else:
            total = simplify_exact(GoldenNumber.coerce(total) + GoldenNumber.coerce(v))
    return total


def _lazy_difference(x: ExactValue, subtracted: list[TermValueLazy]) -> LazyReal:
    total = _lazy_sum(subtracted)
    if isinstance(total, LazyReal):
        return LazyReal._wrap(x) - total
    diff = simplify_exact(GoldenNumber.coerce(x) - GoldenNumber.coerce(total))
    return LazyReal._wrap(diff)


def lazy_digits(provider: SequenceProvider, x: Rational | GoldenNumber,
                depth: int, max_bits: int | None = None) -> ExpansionTrace:
    """Lexicographically smallest expansion prefix of x.

    Digit n is 0 exactly when the remaining tail S_n still covers the
    running remainder; an exact tie keeps the digit at 0.  Tail
    comparisons escalate precision through certified enclosures.
    """
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    x = _coerce_target(x)
    _check_range(provider, x, max_bits)
    cap = precision_cap(max_bits)
    if not provider.is_exact:
        return _lazy_enclosure(provider, x, depth, cap)
    digits: list[int] = []
    remainders: list[Value] = []
    remainder: ExactValue = x
    for n in range(1, depth + 1):
        tail = provider.tail_value(n)
        verdict = cmp_adaptive(remainder, tail, cap)
        if verdict is Ordering.INCONCLUSIVE:
            raise PrecisionExhausted(n, "lazy tail comparison")
        if verdict is Ordering.GREATER:
            term = provider.term(n)
            assert not isinstance(term, LazyReal)
            digits.append(1)
            remainder = simplify_exact(
                GoldenNumber.coerce(remainder) - GoldenNumber.coerce(term))
        else:
            digits.append(0)
        remainders.append(remainder)
    return ExpansionTrace(tuple(digits), tuple(remainders))


def _lazy_enclosure(provider: SequenceProvider, x: ExactValue, depth: int,
                    cap: int) -> ExpansionTrace:
    digits: list[int] = []
    chosen: list[TermValueLazy] = []
    remainders: list[Value] = []
    for n in range(1, depth + 1):
        remainder = _lazy_difference(x, chosen)
        verdict = cmp_adaptive(remainder, provider.tail_value(n), cap)
        if verdict is Ordering.INCONCLUSIVE:
            raise PrecisionExhausted(n, "lazy tail comparison")
        if verdict is Ordering.GREATER:
            digits.append(1)
            chosen.append(provider.term(n))
        else:
            digits.append(0)
        remainders.append(_lazy_difference(x, chosen).enclosure(_TRACE_DISPLAY_BITS))
    return ExpansionTrace(tuple(digits), tuple(remainders))


def digit_tail_sum(provider: SequenceProvider,
                   digits: EventuallyPeriodicDigits,
                   start: int) -> ExactValue | None:
    """Exact sum over i > start of digits(i) * p_i, when the sequence has
    closed-form geometric structure; None otherwise.

    Beyond the preperiods the summand is periodic, so each residue class
    collapses to a geometric series in ratio^L.
    """
    form = provider.eventual_form()
    if form is None:
        return None
    split = max(start, form.start, len(digits.preperiod))
    total: ExactValue = Fraction(0)
    for i in range(start + 1, split + 1):
        if digits.digit(i):
            total = total + provider.term(i)  # type: ignore[operator]
    span = lcm(len(digits.period), len(form.weights))
    ratio_block = form.ratio ** span
    denominator = 1 - ratio_block
    for offset in range(1, span + 1):
        i0 = split + offset
        if digits.digit(i0):
            weight = form.weights[i0 % len(form.weights)]
            total = total + weight * (form.ratio ** i0) / denominator
    return simplify_exact(GoldenNumber.coerce(total))


def digit_tail_enclosure(provider: SequenceProvider,
                         digits: EventuallyPeriodicDigits,
                         start: int, bits: int) -> DyadicInterval:
    """Certified enclosure of sum over i > start of digits(i) * p_i.

    Sums an exact prefix and bounds the rest by the full tail: the
    unknown continuation lies in [0, S_split].
    """
    take = 16
    target = Fraction(1, 1 << (bits - 1))
    while True:
        split = start + take
        lo = Fraction(0)
        hi = Fraction(0)
        for i in range(start + 1, split + 1):
            if digits.digit(i):
                value = provider.term(i)
                if isinstance(value, LazyReal):
                    enclosure = value.enclosure(bits + 8)
                    lo += enclosure.lo
                    hi += enclosure.hi
                else:
                    exact = GoldenNumber.coerce(value)
                    if exact.is_rational:
                        lo += exact.as_fraction()
                        hi += exact.as_fraction()
                    else:
                        enclosure = exact.enclosure(bits + 8)
                        lo += enclosure.lo
                        hi += enclosure.hi
        rest = provider.tail_enclosure(split, bits + 4).interval
        hi += rest.hi
        if (hi - lo) <= target * max(Fraction(1), hi):
            return DyadicInterval.enclosing(lo, hi, bits)
        take *= 2


def digit_tail_value(provider: SequenceProvider,
                     digits: EventuallyPeriodicDigits,
                     start: int) -> TermValueLazy:
    exact = digit_tail_sum(provider, digits, start)
    if exact is not None:
        return exact
    return LazyReal(
        lambda bits: digit_tail_enclosure(provider, digits, start, bits),
        f"tail digits from {start}")


def evaluate(provider: SequenceProvider, digits: EventuallyPeriodicDigits,
             bits: int | None = None) -> Value:
    """Value of an eventually periodic expansion: sum of digits(i) * p_i.

    Exact when the sequence admits closed-form periodic sums or the
    expansion is finite over exact terms; otherwise a certified enclosure
    at the requested precision.
    """
    exact = digit_tail_sum(provider, digits, 0)
    if exact is not None:
        return exact
    if digits.is_finite and provider.is_exact:
        total: ExactValue = Fraction(0)
        for i in range(1, len(digits.preperiod) + 1):
            if digits.digit(i):
                total = total + provider.term(i)  # type: ignore[operator]
        return simplify_exact(GoldenNumber.coerce(total))
    return digit_tail_enclosure(provider, digits, 0, bits if bits else 64)
