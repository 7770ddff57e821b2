"""Type definitions and enums for the consistent-pairs toolkit."""

from enum import Enum


class CaseKind(str, Enum):
    """Enum for the operator cases."""

    S = "S"  # d/dx and x -> x+1
    Q = "Q"  # x d/dx and x -> qx
    M = "M"  # x d/dx and x -> x^q
    TWO_S = "2S"  # x -> x+1 and x -> x+alpha
    TWO_Q = "2Q"  # x -> q1 x and x -> q2 x
    TWO_M = "2M"  # x -> x^p and x -> x^q


class OperatorKind(str, Enum):
    """Enum for which operator a scalar operator is a polynomial in."""

    DELTA = "delta"
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"


class SeriesPoint(str, Enum):
    """Enum for the expansion point of a series."""

    ZERO = "zero"
    INFINITY = "infinity"  # series in t = 1/x


class ReductionOutcome(str, Enum):
    """Enum for the outcome of block triangularization."""

    SCALAR = "scalar"  # A became d*I
    BLOCK = "block"  # both matrices lower block triangular


class Verdict(str, Enum):
    """Enum for user-visible verdicts."""

    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    CERTIFIED = "certified"
    NOT_CERTIFIED = "not-certified"
    VERIFIED = "verified"
    DEGENERATE = "degenerate"


class ExitCode(int, Enum):
    """Enum for command exit codes."""

    SUCCESS = 0
    NEGATIVE = 1  # valid input, negative answer
    INPUT_ERROR = 2
    RESOURCE_CAP = 3
