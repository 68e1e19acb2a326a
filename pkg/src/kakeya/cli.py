"""Command-line front end with deterministic text and JSON output.

Exit codes: 0 for a conclusive verdict, 2 when a result is inconclusive
(raise the precision cap and retry), 1 for usage and validation errors.

JSON output keeps a stable shape: {"version", "command", "sequence",
"verdict", "timings_ms"}.  All rational values are exact "p/q" strings,
golden-field values are {"a", "b"} coefficient pairs for a + b*phi, and
enclosures are {"lo", "hi", "bits"}.  "timings_ms" stays null unless
--timings is given, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import (DepthTooLarge, KakeyaError, OutOfRangeError, ParseError,
                     PrecisionExhausted, RatioBoundUnavailable,
                     ValidationError)
from .numerics import DyadicInterval, GoldenNumber
from .sequences import KakeyaStatus, check_kakeya, parse_sequence_spec
from .expansion import (evaluate, format_digits, greedy_digits, lazy_digits,
                        parse_digits)
from .analysis import (OptimalityStatus, UniquenessStatus,
                       build_counterexample, certify_uniqueness,
                       check_optimality, check_unique_candidate,
                       classify_index)
from .oracle import enumerate_prefixes, error_envelope


def render_value(value):
    """Exact JSON rendering: no floats ever cross the wire."""
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, GoldenNumber):
        return {"a": str(value.a), "b": str(value.b)}
    if isinstance(value, DyadicInterval):
        return {"lo": str(value.lo), "hi": str(value.hi), "bits": value.bits}
    raise TypeError(f"cannot render {value!r}")


def render_value_text(value) -> str:
    rendered = render_value(value)
    if isinstance(rendered, str):
        return rendered
    if "a" in rendered:
        return f"{rendered['a']} + {rendered['b']}*phi"
    return f"[{rendered['lo']}, {rendered['hi']}]"


def _word_text(digits) -> str:
    return "".join(str(d) for d in digits)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kakeya",
        description="Greedy, lazy and unique binary expansions over Kakeya "
                    "sequences, with exact verdicts.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, x: bool = False) -> None:
        p.add_argument("--seq", required=True,
                       help="sequence spec, e.g. geometric:3/2, geometric:phi, "
                            "fib, trib, perturbed-phi:alternating:1/10, file:PATH")
        if x:
            p.add_argument("--x", required=True,
                           help="target value as a rational, e.g. 8/15")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--timings", action="store_true",
                       help="measure and report elapsed milliseconds")
        p.add_argument("--precision-bits", type=int, default=None,
                       help="override the adaptive precision cap")
        p.add_argument("--allow-non-kakeya", action="store_true",
                       help="permit geometric bases outside (1, 2]")

    p = sub.add_parser("check-kakeya", help="verify p_n <= S_n")
    common(p)
    p.add_argument("--depth", type=int, default=32)

    p = sub.add_parser("expand", help="greedy or lazy digits of x")
    common(p, x=True)
    p.add_argument("--mode", choices=("greedy", "lazy"), default="greedy")
    p.add_argument("--digits", type=int, required=True, help="number of digits")

    p = sub.add_parser("enumerate", help="all feasible prefixes of x")
    common(p, x=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--allow-deep", action="store_true",
                   help="lift the combinatorial depth guard")

    p = sub.add_parser("optimal", help="decide greedy optimality")
    common(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--find-counterexample", action="store_true",
                   help="construct a number whose greedy expansion is beaten")
    p.add_argument("--at-n", type=int, default=None,
                   help="build the counterexample from the sandwich at this index")

    p = sub.add_parser("unique", help="certify existence of unique expansions")
    common(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--candidate", default=None,
                   help="check this digit word instead, e.g. '(10)' or '0^3(10)'")

    p = sub.add_parser("envelope", help="greedy/lazy error envelope vs oracle")
    common(p, x=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--allow-deep", action="store_true")

    return parser


def _run_check_kakeya(provider, args):
    verdict = check_kakeya(provider, args.depth, args.precision_bits)
    payload = {"status": verdict.status.value, "depth": args.depth,
               "witness": verdict.witness,
               "equality_indices": list(verdict.equality_indices),
               "basis": verdict.basis}
    lines = [f"status: {verdict.status.value}"]
    if verdict.witness is not None:
        lines.append(f"witness index: {verdict.witness}")
    if verdict.equality_indices:
        lines.append(f"tail equalities at: {list(verdict.equality_indices)}")
    lines.append(f"basis: {verdict.basis}")
    return payload, lines, 0


def _run_expand(provider, args):
    x = _parse_x(args.x)
    runner = greedy_digits if args.mode == "greedy" else lazy_digits
    trace = runner(provider, x, args.digits, args.precision_bits)
    payload = {"status": "expanded", "depth": args.digits, "mode": args.mode,
               "digits": _word_text(trace.digits),
               "remainder": render_value(trace.final_remainder),
               "remainders": [render_value(r) for r in trace.remainders]}
    lines = [f"digits: {_word_text(trace.digits)}",
             f"remainder: {render_value_text(trace.final_remainder)}"]
    return payload, lines, 0


def _run_enumerate(provider, args):
    x = _parse_x(args.x)
    prefixes = enumerate_prefixes(provider, x, args.depth,
                                  allow_deep=args.allow_deep,
                                  max_bits=args.precision_bits)
    payload = {"status": "enumerated", "depth": args.depth,
               "count": len(prefixes.prefixes),
               "prefixes": [{"digits": _word_text(e.digits),
                             "remainder": render_value(e.remainder),
                             "certified": e.certified}
                            for e in prefixes.prefixes]}
    lines = [f"{len(prefixes.prefixes)} feasible prefixes at depth {args.depth}:"]
    lines += [f"  {_word_text(e.digits)}  remainder "
              f"{render_value_text(e.remainder)}" for e in prefixes.prefixes]
    return payload, lines, 0


def _run_optimal(provider, args):
    verdict = check_optimality(provider, args.depth, args.precision_bits)
    payload = {"status": verdict.status.value, "depth": verdict.depth}
    lines = [f"status: {verdict.status.value}"]
    exit_code = 0
    if verdict.status is OptimalityStatus.OPTIMAL_WITNESS:
        payload["witness"] = {"window_counts": list(verdict.witness_counts)}
        lines.append(f"window counts: {list(verdict.witness_counts)}")
    elif verdict.status is OptimalityStatus.NOT_OPTIMAL:
        w = verdict.sandwich
        payload["witness"] = {"n": w.n, "k": w.k,
                              "lower": render_value(w.lower),
                              "upper": render_value(w.upper)}
        lines.append(f"sandwich at n={w.n}, k={w.k}: "
                     f"{render_value_text(w.lower)} < p_{w.n} < "
                     f"{render_value_text(w.upper)}")
        if args.find_counterexample:
            witness = w
            if args.at_n is not None and args.at_n != w.n:
                kind, payload_w = classify_index(provider, args.at_n,
                                                 args.precision_bits)
                if kind != "sandwich":
                    raise ValidationError(
                        f"index {args.at_n} is not a sandwich index ({kind})")
                witness = payload_w
            report = build_counterexample(provider, witness,
                                          args.precision_bits)
            payload["counterexample"] = {
                "x": render_value(report.x),
                "alt_digits": _word_text(report.alt_digits),
                "greedy_digits": _word_text(report.greedy_digits),
                "position": report.position,
                "greedy_error": render_value(report.greedy_error),
                "alt_error": render_value(report.alt_error)}
            lines.append(
                f"counterexample x = {render_value_text(report.x)}: greedy "
                f"{_word_text(report.greedy_digits)} has error "
                f"{render_value_text(report.greedy_error)} at position "
                f"{report.position}, while {_word_text(report.alt_digits)} "
                "has error 0")
    elif verdict.status is OptimalityStatus.TAIL_DEGENERATE:
        payload["degenerate_indices"] = list(verdict.degenerate_indices)
        lines.append(f"tail equals term at: {list(verdict.degenerate_indices)}")
    else:
        payload["inconclusive_at"] = verdict.inconclusive_at
        lines.append(f"inconclusive at index {verdict.inconclusive_at}")
        exit_code = 2
    return payload, lines, exit_code


def _run_unique(provider, args):
    if args.candidate is not None:
        digits = parse_digits(args.candidate)
        verdict = check_unique_candidate(provider, digits, args.depth,
                                         args.precision_bits)
    else:
        verdict = certify_uniqueness(provider, args.depth, args.precision_bits)
    payload = {"status": verdict.status.value, "depth": verdict.depth}
    if verdict.route is not None:
        payload["route"] = verdict.route.value
    if verdict.candidate is not None:
        payload["digits"] = format_digits(verdict.candidate)
    if verdict.checked_indices:
        payload["checked_indices"] = list(verdict.checked_indices)
    if verdict.violation_index is not None:
        payload["violation_index"] = verdict.violation_index
    payload["detail"] = verdict.detail
    lines = [f"status: {verdict.status.value}"]
    if verdict.route:
        lines.append(f"route: {verdict.route.value}")
    if verdict.candidate is not None:
        lines.append(f"digits: {format_digits(verdict.candidate)}")
    if verdict.violation_index is not None:
        lines.append(f"violation at index {verdict.violation_index}")
    if verdict.detail:
        lines.append(f"detail: {verdict.detail}")
    exit_code = 2 if verdict.status is UniquenessStatus.INCONCLUSIVE else 0
    return payload, lines, exit_code


def _run_envelope(provider, args):
    x = _parse_x(args.x)
    report = error_envelope(provider, x, args.depth,
                            allow_deep=args.allow_deep,
                            max_bits=args.precision_bits)
    status = "contained" if report.all_contained else "violations"
    payload = {"status": status, "depth": report.depth,
               "errors": [{"n": lv.n,
                           "greedy": render_value(lv.greedy_error),
                           "lazy": render_value(lv.lazy_error),
                           "observed": [render_value(e) for e in lv.observed_errors],
                           "contained": lv.contained,
                           "certified": lv.certified}
                          for lv in report.levels]}
    lines = [f"status: {status}"]
    for lv in report.levels:
        mark = "ok" if lv.contained else "VIOLATION"
        lines.append(f"  n={lv.n}: [{render_value_text(lv.greedy_error)}, "
                     f"{render_value_text(lv.lazy_error)}] "
                     f"covers {len(lv.observed_errors)} errors: {mark}")
    return payload, lines, 0


def _parse_x(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"--x must be a rational, got {text!r}") from exc


_RUNNERS = {
    "check-kakeya": _run_check_kakeya,
    "expand": _run_expand,
    "enumerate": _run_enumerate,
    "optimal": _run_optimal,
    "unique": _run_unique,
    "envelope": _run_envelope,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        provider = parse_sequence_spec(args.seq, args.allow_non_kakeya)
        payload, lines, exit_code = _RUNNERS[args.command](provider, args)
    except PrecisionExhausted as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValidationError, OutOfRangeError, DepthTooLarge,
            RatioBoundUnavailable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KakeyaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    elapsed_ms = int((time.monotonic() - started) * 1000)
    if args.json:
        document = {
            "version": __version__,
            "command": args.command,
            "sequence": provider.describe(),
            "verdict": payload,
            "timings_ms": elapsed_ms if args.timings else None,
        }
        print(json.dumps(document, separators=(", ", ": ")))
    else:
        print(f"sequence: {provider.describe()}")
        for line in lines:
            print(line)
        if args.timings:
            print(f"elapsed: {elapsed_ms} ms")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
