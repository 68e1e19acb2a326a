"""Exception types shared across the package."""

from __future__ import annotations


class KakeyaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(KakeyaError):
    """Malformed sequence-spec or digit-word text."""

    def __init__(self, position: int, message: str) -> None:
        super().__init__(f"parse error at position {position}: {message}")
        self.position = position
        self.message = message


class ValidationError(KakeyaError):
    """Structurally valid input that violates a constructor constraint."""


class PrecisionExhausted(KakeyaError):
    """An adaptive comparison stayed inconclusive at the precision cap.

    Carries the step (digit index or check index) at which escalation gave
    up, so callers can report where more precision would be needed.
    """

    def __init__(self, step: int, detail: str = "") -> None:
        msg = f"precision cap reached at step {step}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.step = step


class OutOfRangeError(KakeyaError):
    """A target value lies outside the representable interval [0, S_0]."""

    def __init__(self, value, bound_side: str) -> None:
        super().__init__(f"value {value} is {bound_side} the representable range")
        self.value = value
        self.bound_side = bound_side


class DepthTooLarge(KakeyaError):
    """Enumeration depth exceeds the combinatorial guard without an override."""


class RatioBoundUnavailable(KakeyaError):
    """No certified geometric ratio bound exists for a sequence's tail."""
