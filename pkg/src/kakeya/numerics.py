"""Exact rationals, dyadic interval arithmetic and the golden-mean field.

Three layers of number representation, from cheapest to most general:

* ``fractions.Fraction`` is the exact rational backbone.
* ``GoldenNumber`` is the quadratic field Q(phi): values a + b*phi with
  rational a, b, closed under the four operations and with an exact sign
  routine.  phi is the positive root of x^2 = x + 1.
* ``AlgebraicConstant`` / ``LazyReal`` cover everything else through
  certified dyadic enclosures that can be refined to any precision.

Comparisons never fall back to floating point.  ``cmp_adaptive`` either
decides exactly (both operands exact) or narrows enclosures until they
separate, reporting ``Ordering.INCONCLUSIVE`` once the precision cap is
hit.  All types here are immutable values and safe to share.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import ValidationError

DEFAULT_PRECISION_CAP = 4096
PRECISION_ENV_VAR = "KAKEYA_MAX_BITS"

Rational = Union[int, Fraction]
ExactValue = Union[Fraction, "GoldenNumber"]


def precision_cap(override: int | None = None) -> int:
    """Resolve the adaptive-precision cap: explicit override, else the
    KAKEYA_MAX_BITS environment variable, else the package default."""
    if override is not None:
        if override < 1:
            raise ValidationError("precision cap must be positive")
        return override
    env = os.environ.get(PRECISION_ENV_VAR)
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValidationError(f"{PRECISION_ENV_VAR} must be an integer") from exc
        if value < 1:
            raise ValidationError(f"{PRECISION_ENV_VAR} must be positive")
        return value
    return DEFAULT_PRECISION_CAP


class Ordering(Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL_CERTIFIED = "equal"
    INCONCLUSIVE = "inconclusive"


def _dyadic_floor(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << bits)
    return Fraction(scaled.numerator // scaled.denominator, 1 << bits)


def _dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << bits)
    return Fraction(-((-scaled.numerator) // scaled.denominator), 1 << bits)


@dataclass(frozen=True)
class DyadicInterval:
    """Certified enclosure [lo, hi] with dyadic rational endpoints.

    ``bits`` records the precision the interval was requested at; the
    endpoints themselves are authoritative.  Addition, subtraction and
    multiplication of dyadics stay dyadic and are computed exactly;
    division and scaling by a general rational round outward.
    """

    lo: Fraction
    hi: Fraction
    bits: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValidationError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @classmethod
    def from_value(cls, x: Rational, bits: int) -> DyadicInterval:
        x = Fraction(x)
        return cls(_dyadic_floor(x, bits), _dyadic_ceil(x, bits), bits)

    @classmethod
    def enclosing(cls, lo: Rational, hi: Rational, bits: int) -> DyadicInterval:
        """Round arbitrary rational bounds outward onto the dyadic grid."""
        return cls(_dyadic_floor(Fraction(lo), bits + 4),
                   _dyadic_ceil(Fraction(hi), bits + 4), bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Rational) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def encloses(self, other: DyadicInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other: DyadicInterval) -> DyadicInterval:
        return DyadicInterval(self.lo + other.lo, self.hi + other.hi,
                              min(self.bits, other.bits))

    def __sub__(self, other: DyadicInterval) -> DyadicInterval:
        return DyadicInterval(self.lo - other.hi, self.hi - other.lo,
                              min(self.bits, other.bits))

    def __neg__(self) -> DyadicInterval:
        return DyadicInterval(-self.hi, -self.lo, self.bits)

    def __mul__(self, other: DyadicInterval) -> DyadicInterval:
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return DyadicInterval(min(products), max(products),
                              min(self.bits, other.bits))

    def scaled(self, factor: Rational, bits: int | None = None) -> DyadicInterval:
        """Multiply by an exact rational scalar, rounding outward."""
        factor = Fraction(factor)
        bits = bits if bits is not None else self.bits
        if factor >= 0:
            lo, hi = self.lo * factor, self.hi * factor
        else:
            lo, hi = self.hi * factor, self.lo * factor
        return DyadicInterval(_dyadic_floor(lo, bits), _dyadic_ceil(hi, bits), bits)

    def inverse(self, bits: int | None = None) -> DyadicInterval:
        if self.lo <= 0 <= self.hi:
            raise ValidationError("cannot invert an interval containing zero")
        bits = bits if bits is not None else self.bits
        lo, hi = Fraction(1) / self.hi, Fraction(1) / self.lo
        return DyadicInterval(_dyadic_floor(lo, bits), _dyadic_ceil(hi, bits), bits)

    def pow_int(self, n: int) -> DyadicInterval:
        """Integer power of a strictly positive interval (monotone case)."""
        if self.lo <= 0:
            raise ValidationError("pow_int requires a strictly positive interval")
        if n == 0:
            return DyadicInterval(Fraction(1), Fraction(1), self.bits)
        if n < 0:
            return self.pow_int(-n).inverse(self.bits)
        return DyadicInterval(self.lo ** n, self.hi ** n, self.bits)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]@{self.bits}b"


class GoldenNumber:
    """Element a + b*phi of the quadratic field Q(phi), phi^2 = phi + 1.

    Coefficients are exact rationals; arithmetic is closed and the sign of
    any element is decidable without approximation, so strict and
    non-strict comparisons against rationals and other field elements are
    always exact.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Rational, b: Rational = 0) -> None:
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("GoldenNumber is immutable")

    @classmethod
    def coerce(cls, x: Rational | GoldenNumber) -> GoldenNumber:
        if isinstance(x, GoldenNumber):
            return x
        return cls(x)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValidationError(f"{self} has an irrational part")
        return self.a

    def sign(self) -> int:
        """Exact sign of a + b*phi.

        For b != 0 reduce to comparing phi with the rational -a/b; that
        comparison squares out the radical: phi > r iff 2r - 1 < 0 or
        (2r - 1)^2 < 5.  Equality with a nonzero rational never happens.
        """
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        r = -self.a / self.b
        t = 2 * r - 1
        phi_above = t < 0 or t * t < 5
        if self.b > 0:
            return 1 if phi_above else -1
        return -1 if phi_above else 1

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GoldenNumber(other)
        if not isinstance(other, GoldenNumber):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other) -> bool:
        diff = self - GoldenNumber.coerce(other)
        return diff.sign() < 0

    def __le__(self, other) -> bool:
        diff = self - GoldenNumber.coerce(other)
        return diff.sign() <= 0

    def __gt__(self, other) -> bool:
        return GoldenNumber.coerce(other) < self

    def __ge__(self, other) -> bool:
        return GoldenNumber.coerce(other) <= self

    def __add__(self, other) -> GoldenNumber:
        other = GoldenNumber.coerce(other)
        return GoldenNumber(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other) -> GoldenNumber:
        other = GoldenNumber.coerce(other)
        return GoldenNumber(self.a - other.a, self.b - other.b)

    def __rsub__(self, other) -> GoldenNumber:
        return GoldenNumber.coerce(other) - self

    def __neg__(self) -> GoldenNumber:
        return GoldenNumber(-self.a, -self.b)

    def __mul__(self, other) -> GoldenNumber:
        other = GoldenNumber.coerce(other)
        # (a + b phi)(c + d phi) with phi^2 = phi + 1
        a, b, c, d = self.a, self.b, other.a, other.b
        return GoldenNumber(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def inverse(self) -> GoldenNumber:
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(phi)")
        # conjugate under phi -> 1 - phi; field norm a^2 + ab - b^2
        norm = self.a * self.a + self.a * self.b - self.b * self.b
        return GoldenNumber((self.a + self.b) / norm, -self.b / norm)

    def __truediv__(self, other) -> GoldenNumber:
        return self * GoldenNumber.coerce(other).inverse()

    def __rtruediv__(self, other) -> GoldenNumber:
        return GoldenNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> GoldenNumber:
        if n < 0:
            return self.inverse() ** (-n)
        result = GoldenNumber(1)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def enclosure(self, bits: int) -> DyadicInterval:
        if self.b == 0:
            return DyadicInterval.from_value(self.a, bits)
        phi = GOLDEN_RATIO_ROOT.enclosure(bits + 4)
        return phi.scaled(self.b, bits) + DyadicInterval.from_value(self.a, bits)

    def __repr__(self) -> str:
        return f"GoldenNumber({self.a!r}, {self.b!r})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*phi"


PHI = GoldenNumber(0, 1)


def _as_integer_coeffs(coeffs: Sequence[Rational]) -> tuple[int, ...]:
    fracs = [Fraction(c) for c in coeffs]
    if not fracs or fracs[0] == 0:
        raise ValidationError("leading polynomial coefficient must be nonzero")
    lcm = 1
    for c in fracs:
        d = c.denominator
        lcm = lcm * d // _gcd(lcm, d)
    return tuple(int(c * lcm) for c in fracs)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _poly_eval(coeffs: tuple[int, ...], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


class AlgebraicConstant:
    """A real algebraic number given by a defining polynomial and an
    isolating interval containing exactly one of its roots.

    Coefficients run from the highest degree down to the constant term;
    rational coefficients are cleared to integers.  The caller asserts
    uniqueness of the root in the interval; the constructor checks that
    the endpoint signs are compatible with a root being present.
    Refinement bisects with exact rational evaluation, so containment is
    never lost, and narrowing is cached and monotone.
    """

    def __init__(self, coeffs: Sequence[Rational], lo: Rational, hi: Rational,
                 name: str | None = None) -> None:
        self.coeffs = _as_integer_coeffs(coeffs)
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValidationError("isolating interval endpoints out of order")
        v_lo = _poly_eval(self.coeffs, lo)
        v_hi = _poly_eval(self.coeffs, hi)
        if v_lo == 0:
            lo = hi = lo
        elif v_hi == 0:
            lo = hi = hi
        elif (v_lo > 0) == (v_hi > 0):
            raise ValidationError("no sign change over the isolating interval")
        self.name = name
        self._state: tuple[Fraction, Fraction, int] = (lo, hi, 1 if v_lo > 0 else -1)

    def enclosure(self, bits: int) -> DyadicInterval:
        return self.refine(bits)

    def refine(self, bits: int) -> DyadicInterval:
        """Bisect until the width is at most 2^(1-bits); exact midpoint
        hits collapse the interval to the root itself."""
        lo, hi, sign_lo = self._state
        target = Fraction(1, 1 << (bits - 1))
        while hi - lo > target:
            mid = (lo + hi) / 2
            v = _poly_eval(self.coeffs, mid)
            if v == 0:
                lo = hi = mid
                break
            if (v > 0) == (sign_lo > 0):
                lo = mid
            else:
                hi = mid
        # Monotone cache: bisection only ever narrows, so racing writers
        # can at worst store an equally valid interval.
        self._state = (lo, hi, sign_lo)
        return DyadicInterval(lo, hi, bits)

    def __repr__(self) -> str:
        label = self.name or f"poly{self.coeffs}"
        lo, hi, _ = self._state
        return f"AlgebraicConstant({label}, [{lo}, {hi}])"


GOLDEN_RATIO_ROOT = AlgebraicConstant((1, -1, -1), 1, 2, name="phi")
TRIBONACCI_ROOT = AlgebraicConstant((1, -1, -1, -1), 1, 2, name="tribonacci")


@dataclass(frozen=True)
class LazyReal:
    """A real number evaluable only through enclosures.

    Wraps a function producing a certified ``DyadicInterval`` at any
    requested precision.  Small combinators keep composite values lazy so
    comparison code can escalate precision through whole expressions.
    """

    evaluate: Callable[[int], DyadicInterval]
    label: str = field(default="", compare=False)

    def enclosure(self, bits: int) -> DyadicInterval:
        return self.evaluate(bits)

    @staticmethod
    def _wrap(x: LazyLike) -> LazyReal:
        if isinstance(x, LazyReal):
            return x
        if isinstance(x, GoldenNumber):
            return LazyReal(x.enclosure, str(x))
        if isinstance(x, AlgebraicConstant):
            return LazyReal(x.enclosure, repr(x))
        frac = Fraction(x)
        return LazyReal(lambda bits: DyadicInterval.from_value(frac, bits), str(frac))

    def __add__(self, other: LazyLike) -> LazyReal:
        rhs = LazyReal._wrap(other)
        return LazyReal(lambda bits: self.evaluate(bits + 1) + rhs.evaluate(bits + 1))

    __radd__ = __add__

    def __sub__(self, other: LazyLike) -> LazyReal:
        rhs = LazyReal._wrap(other)
        return LazyReal(lambda bits: self.evaluate(bits + 1) - rhs.evaluate(bits + 1))

    def __rsub__(self, other: LazyLike) -> LazyReal:
        lhs = LazyReal._wrap(other)
        return LazyReal(lambda bits: lhs.evaluate(bits + 1) - self.evaluate(bits + 1))

    def __neg__(self) -> LazyReal:
        return LazyReal(lambda bits: -self.evaluate(bits))

    def __mul__(self, other: LazyLike) -> LazyReal:
        rhs = LazyReal._wrap(other)
        return LazyReal(lambda bits: self.evaluate(bits + 2) * rhs.evaluate(bits + 2))

    __rmul__ = __mul__

    def scaled(self, factor: Rational) -> LazyReal:
        factor = Fraction(factor)
        return LazyReal(lambda bits: self.evaluate(bits + 2).scaled(factor, bits))


LazyLike = Union[int, Fraction, GoldenNumber, AlgebraicConstant, LazyReal]


def _is_exact(x: LazyLike) -> bool:
    return isinstance(x, (int, Fraction, GoldenNumber))


def _exact_cmp(a: Rational | GoldenNumber, b: Rational | GoldenNumber) -> Ordering:
    if isinstance(a, GoldenNumber) or isinstance(b, GoldenNumber):
        ga, gb = GoldenNumber.coerce(a), GoldenNumber.coerce(b)
        s = (ga - gb).sign()
    else:
        fa, fb = Fraction(a), Fraction(b)
        s = (fa > fb) - (fa < fb)
    if s < 0:
        return Ordering.LESS
    if s > 0:
        return Ordering.GREATER
    return Ordering.EQUAL_CERTIFIED


def _enclose(x: LazyLike, bits: int) -> DyadicInterval:
    if isinstance(x, (LazyReal, AlgebraicConstant)):
        return x.enclosure(bits)
    if isinstance(x, GoldenNumber):
        return x.enclosure(bits)
    return DyadicInterval.from_value(Fraction(x), bits)


def cmp_adaptive(a: LazyLike, b: LazyLike, max_bits: int | None = None) -> Ordering:
    """Compare two real values, exactly when possible.

    Exact operands (rationals, golden numbers) are decided in their field,
    including certified equality.  Otherwise enclosures are refined on a
    doubling schedule until they separate or ``max_bits`` is reached, in
    which case ``Ordering.INCONCLUSIVE`` is returned as a value, never an
    exception.
    """
    if _is_exact(a) and _is_exact(b):
        return _exact_cmp(a, b)  # type: ignore[arg-type]
    cap = precision_cap(max_bits)
    bits = 16
    while True:
        bits = min(bits, cap)
        ia = _enclose(a, bits)
        ib = _enclose(b, bits)
        if ia.hi < ib.lo:
            return Ordering.LESS
        if ib.hi < ia.lo:
            return Ordering.GREATER
        if bits >= cap:
            return Ordering.INCONCLUSIVE
        bits *= 2


def golden_compare_integers(s: int, t: int) -> Ordering:
    """Decide t versus phi*s for positive integers using only integers.

    For t/s > 1 the equivalence t > phi*s iff t^2 > t*s + s^2 holds;
    t <= s is immediately LESS since phi > 1.  Equality cannot occur
    because phi is irrational.
    """
    if s <= 0 or t <= 0:
        raise ValidationError("golden_compare_integers requires positive integers")
    if t <= s:
        return Ordering.LESS
    lhs = t * t
    rhs = t * s + s * s
    if lhs == rhs:  # impossible; guards the equivalence's precondition
        raise ValidationError("unexpected integer solution of t^2 = ts + s^2")
    return Ordering.GREATER if lhs > rhs else Ordering.LESS


def refine(constant: AlgebraicConstant, bits: int) -> DyadicInterval:
    """Narrow an algebraic constant's enclosure to width at most 2^(1-bits)."""
    if bits < 1:
        raise ValidationError("bits must be positive")
    return constant.refine(bits)
