"""Exact and validated arithmetic for binary expansions over Kakeya sequences.

Greedy, lazy and unique expansions, an optimality decision with
counterexample construction, and a brute-force enumeration oracle, all
over exact rationals, the golden-mean field Q(phi), and certified dyadic
enclosures.
"""

from .errors import (DepthTooLarge, KakeyaError, OutOfRangeError, ParseError,
                     PrecisionExhausted, RatioBoundUnavailable, ValidationError)
from .numerics import (AlgebraicConstant, DyadicInterval, GoldenNumber,
                       GOLDEN_RATIO_ROOT, LazyReal, Ordering, PHI,
                       TRIBONACCI_ROOT, cmp_adaptive, golden_compare_integers,
                       precision_cap, refine)
from .sequences import (EventualForm, FibonacciReciprocals,
                        GeometricSequence, GoldenRatioCertificate,
                        KakeyaStatus, KakeyaVerdict, PerturbationMode,
                        PerturbationSchedule, PerturbedGoldenSequence,
                        SequenceProvider, TailEnclosure,
                        TailOverrunCertificate, TribonacciReciprocals,
                        UserDefinedSequence, check_kakeya,
                        fibonacci_number, load_sequence_file,
                        parse_sequence_spec, tail_enclosure,
                        tribonacci_number)
from .expansion import (DigitWord, EventuallyPeriodicDigits, ExpansionTrace,
                        digit_tail_value, evaluate, format_digits,
                        greedy_digits, lazy_digits, parse_digits, reflect)
from .analysis import (CounterexampleReport, OptimalityStatus,
                       OptimalityVerdict, SandwichWitness, UniquenessRoute,
                       UniquenessStatus, UniquenessVerdict,
                       build_counterexample, certify_uniqueness,
                       check_optimality, check_unique_candidate,
                       classify_index, normalized_error_scale)
from .oracle import (EnvelopeLevel, EnvelopeReport, LevelMinimum, PrefixEntry,
                     PrefixSet, branching_positions, count_branchings,
                     enumerate_prefixes, error_envelope, min_error_per_depth)

__version__ = "0.1.0"
