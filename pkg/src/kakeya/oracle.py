"""Brute-force enumeration of feasible expansion prefixes.

Independent ground truth for the expansion engines: a prefix of length n
extends to a full expansion of x exactly when its remainder r lies in
[0, S_n], so depth-first enumeration with remainder propagation and that
window as the pruning rule produces the complete feasible set.  When an
enclosure comparison cannot decide feasibility at the precision cap the
prefix is kept and flagged, so the enumeration only ever over-approximates.

Everything here favours exact arithmetic; enumeration order is fixed
(digit 0 before digit 1) and results are sorted, so output is
deterministic regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DepthTooLarge, OutOfRangeError, ValidationError
from .numerics import (DyadicInterval, ExactValue, GoldenNumber, LazyReal,
                       Ordering, Rational, cmp_adaptive, precision_cap)
from .sequences import SequenceProvider, simplify_exact
from .expansion import (DigitWord, ExpansionTrace, greedy_digits, lazy_digits,
                        _lazy_difference, _coerce_target)

DEPTH_GUARD = 24


@dataclass(frozen=True)
class PrefixEntry:
    """A feasible prefix with its remainder; ``certified`` is False when
    feasibility was kept only because a comparison stayed inconclusive."""

    digits: DigitWord
    remainder: ExactValue | DyadicInterval
    certified: bool = True


@dataclass(frozen=True)
class PrefixSet:
    depth: int
    prefixes: tuple[PrefixEntry, ...]

    def words(self) -> tuple[DigitWord, ...]:
        return tuple(entry.digits for entry in self.prefixes)

    def __contains__(self, word) -> bool:
        target = tuple(int(d) for d in word)
        return any(entry.digits == target for entry in self.prefixes)


@dataclass(frozen=True)
class LevelMinimum:
    n: int
    value: ExactValue | DyadicInterval
    certified: bool


@dataclass(frozen=True)
class EnvelopeLevel:
    n: int
    greedy_error: ExactValue | DyadicInterval
    lazy_error: ExactValue | DyadicInterval
    observed_errors: tuple
    contained: bool
    certified: bool


@dataclass(frozen=True)
class EnvelopeReport:
    """Per-depth check that every feasible remainder lies between the
    greedy and the lazy truncation errors."""

    depth: int
    levels: tuple[EnvelopeLevel, ...]

    @property
    def all_contained(self) -> bool:
        return all(level.contained for level in self.levels)


class _Node:
    __slots__ = ("digits", "exact", "lazy", "certified")

    def __init__(self, digits, exact, lazy, certified):
        self.digits = digits
        self.exact = exact          # ExactValue when the spec is exact
        self.lazy = lazy            # list of chosen terms for lazy specs
        self.certified = certified


def _guard_depth(depth: int, allow_deep: bool) -> None:
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    if depth > DEPTH_GUARD and not allow_deep:
        raise DepthTooLarge(
            f"depth {depth} exceeds the enumeration guard {DEPTH_GUARD}; "
            "pass allow_deep to override")


def _feasible(remainder, tail, cap) -> tuple[bool, bool]:
    """(feasible, certified) for the window 0 <= remainder <= tail."""
    low = cmp_adaptive(remainder, Fraction(0), cap)
    if low is Ordering.LESS:
        return False, True
    high = cmp_adaptive(remainder, tail, cap)
    if high is Ordering.GREATER:
        return False, True
    flagged = Ordering.INCONCLUSIVE in (low, high)
    return True, not flagged


def _enumerate_levels(provider: SequenceProvider, x, depth: int,
                      max_bits: int | None) -> list[list[_Node]]:
    cap = precision_cap(max_bits)
    x = _coerce_target(x)
    exact_mode = provider.is_exact
    root_feasible, root_certified = _feasible(
        x if exact_mode else _lazy_difference(x, []),
        provider.tail_value(0), cap)
    if not root_feasible:
        raise OutOfRangeError(x, "outside")
    root = _Node((), x if exact_mode else None, [] if not exact_mode else None,
                 root_certified)
    levels = [[root]]
    for level in range(1, depth + 1):
        term = provider.term(level)
        tail = provider.tail_value(level)
        next_nodes: list[_Node] = []
        for node in levels[level - 1]:
            for digit in (0, 1):
                if exact_mode:
                    if digit:
                        remainder = simplify_exact(
                            GoldenNumber.coerce(node.exact)
                            - GoldenNumber.coerce(term))
                    else:
                        remainder = node.exact
                    probe = remainder
                    chosen = None
                else:
                    chosen = node.lazy + [term] if digit else node.lazy
                    probe = _lazy_difference(x, chosen)
                    remainder = None
                feasible, certified = _feasible(probe, tail, cap)
                if feasible:
                    next_nodes.append(_Node(node.digits + (digit,),
                                            remainder, chosen,
                                            node.certified and certified))
        levels.append(next_nodes)
    return levels


def _node_remainder(node: _Node, x) -> ExactValue | DyadicInterval:
    if node.exact is not None or node.lazy is None:
        return node.exact
    return _lazy_difference(_coerce_target(x), node.lazy).enclosure(64)


def enumerate_prefixes(provider: SequenceProvider, x: Rational | GoldenNumber,
                       depth: int, allow_deep: bool = False,
                       max_bits: int | None = None) -> PrefixSet:
    """All digit words of the given length whose remainder stays in the
    feasibility window [0, S_depth]; exactly the prefixes extendable to
    full expansions of x."""
    _guard_depth(depth, allow_deep)
    levels = _enumerate_levels(provider, x, depth, max_bits)
    entries = tuple(PrefixEntry(node.digits, _node_remainder(node, x),
                                node.certified)
                    for node in sorted(levels[depth], key=lambda nd: nd.digits))
    return PrefixSet(depth=depth, prefixes=entries)


def min_error_per_depth(provider: SequenceProvider, x: Rational | GoldenNumber,
                        depth: int, allow_deep: bool = False,
                        max_bits: int | None = None) -> list[LevelMinimum]:
    """Minimum feasible remainder at each depth n <= depth."""
    _guard_depth(depth, allow_deep)
    levels = _enumerate_levels(provider, x, depth, max_bits)
    minima: list[LevelMinimum] = []
    for n in range(1, depth + 1):
        nodes = levels[n]
        if not nodes:
            raise OutOfRangeError(x, "outside")
        if provider.is_exact:
            best = min(GoldenNumber.coerce(node.exact) for node in nodes)
            minima.append(LevelMinimum(n, simplify_exact(best),
                                       all(nd.certified for nd in nodes)))
        else:
            enclosures = [_node_remainder(node, x) for node in nodes]
            best = min(enclosures, key=lambda iv: iv.lo)
            minima.append(LevelMinimum(n, best, False))
    return minima


def error_envelope(provider: SequenceProvider, x: Rational | GoldenNumber,
                   depth: int, allow_deep: bool = False,
                   max_bits: int | None = None) -> EnvelopeReport:
    """Check every feasible remainder against the greedy and lazy errors.

    Containment is a theorem only when the sequence carries an optimality
    witness; the report is informational otherwise and violations are
    listed, never suppressed.
    """
    _guard_depth(depth, allow_deep)
    levels = _enumerate_levels(provider, x, depth, max_bits)
    greedy = greedy_digits(provider, x, depth, max_bits)
    lazy = lazy_digits(provider, x, depth, max_bits)
    out: list[EnvelopeLevel] = []
    for n in range(1, depth + 1):
        g_err = greedy.remainders[n - 1]
        l_err = lazy.remainders[n - 1]
        observed = tuple(_node_remainder(node, x) for node in levels[n])
        if provider.is_exact:
            lo = GoldenNumber.coerce(g_err)
            hi = GoldenNumber.coerce(l_err)
            contained = all(lo <= GoldenNumber.coerce(e) <= hi for e in observed)
            certified = all(node.certified for node in levels[n])
        else:
            contained = all(
                g_err.lo <= e.hi and e.lo <= l_err.hi for e in observed)
            certified = False
        out.append(EnvelopeLevel(n, g_err, l_err, observed, contained, certified))
    return EnvelopeReport(depth=depth, levels=tuple(out))


def branching_positions(provider: SequenceProvider, x: Rational | GoldenNumber,
                        depth: int, allow_deep: bool = False,
                        max_bits: int | None = None) -> list[int]:
    """Digit positions at which some feasible prefix admits both
    extensions; one entry per branching node."""
    _guard_depth(depth, allow_deep)
    levels = _enumerate_levels(provider, x, depth, max_bits)
    positions: list[int] = []
    for n in range(1, depth + 1):
        children = {node.digits for node in levels[n]}
        for node in levels[n - 1]:
            if node.digits + (0,) in children and node.digits + (1,) in children:
                positions.append(n)
    return positions


def count_branchings(provider: SequenceProvider, x: Rational | GoldenNumber,
                     depth: int, allow_deep: bool = False,
                     max_bits: int | None = None) -> int:
    """Number of feasible prefixes (across all levels below ``depth``)
    whose both one-digit extensions remain feasible."""
    return len(branching_positions(provider, x, depth, allow_deep, max_bits))
