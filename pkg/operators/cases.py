"""Operator cases: which derivation and which sigma endomorphisms act, and with what mu.

Single-sigma cases pair a derivation delta with an automorphism or endomorphism sigma such
that delta sigma = mu sigma delta:

* S: delta = d/dx, sigma(x) = x + 1, mu = 1
* Q: delta = x d/dx, sigma(x) = q x, mu = 1
* M: delta = x d/dx, sigma(x) = x**q, mu = q

Two-sigma cases pair two commuting substitutions: 2S (x + 1, x + alpha), 2Q (q1 x, q2 x) and
2M (x**p, x**q).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from sympy import factorint

from config.logging_config import get_logger
from core.exceptions import (
    InputError,
    InternalConsistencyError,
    NoDerivationError,
    OperatorError,
    SigmaNotInvertibleError,
)
from core.types import CaseKind, SeriesPoint
from exact.constants import ConstantsField
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc

logger = get_logger(__name__)


def _prime_vector(n: int) -> dict[int, int]:
    return dict(factorint(n))


def multiplicatively_independent(p: int, q: int) -> bool:
    """Decide whether p**a = q**b forces a = b = 0 by comparing prime-exponent vectors."""
    vp, vq = _prime_vector(p), _prime_vector(q)
    if set(vp) != set(vq):
        return True
    ratios = {Fraction(vp[prime], vq[prime]) for prime in vp}
    return len(ratios) > 1


@dataclass(frozen=True)
class OperatorCase:
    """Tagged case with its parameters.

    ``q`` is the single-sigma parameter (a field element for Q, an int for M); ``q1``/``q2``
    are the two-sigma parameters (field elements for 2Q, ints for 2M); ``alpha`` is the 2S
    shift, declared irrational by being a bare generator or by ``irrational=True``.
    """

    kind: CaseKind
    field: ConstantsField
    q: Any = None
    q1: Any = None
    q2: Any = None
    alpha: Any = None
    irrational: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", CaseKind(self.kind))
        field = self.field
        if self.kind == CaseKind.Q:
            q = field.convert(self.q)
            object.__setattr__(self, "q", q)
            rational = field.as_rational(q)
            if rational is not None and rational in (0, 1, -1):
                raise InputError(f"q = {rational} is excluded in case Q", field="q")
        elif self.kind == CaseKind.M:
            if not isinstance(self.q, int) or self.q < 2:
                raise InputError(f"case M needs an integer q >= 2, got {self.q!r}", field="q")
        elif self.kind == CaseKind.TWO_Q:
            q1, q2 = field.convert(self.q1), field.convert(self.q2)
            object.__setattr__(self, "q1", q1)
            object.__setattr__(self, "q2", q2)
            for name, value in (("q1", q1), ("q2", q2)):
                rational = field.as_rational(value)
                if rational is not None and rational in (0, 1, -1):
                    raise InputError(f"{name} = {rational} is excluded in case 2Q", field=name)
        elif self.kind == CaseKind.TWO_M:
            for name, value in (("q1", self.q1), ("q2", self.q2)):
                if not isinstance(value, int) or value < 2:
                    raise InputError(f"case 2M needs integers >= 2, got {value!r}", field=name)
            if not multiplicatively_independent(self.q1, self.q2):
                raise InputError(
                    f"{self.q1} and {self.q2} are multiplicatively dependent", field="q2"
                )
        elif self.kind == CaseKind.TWO_S:
            alpha = field.convert(self.alpha)
            object.__setattr__(self, "alpha", alpha)
            if field.as_rational(alpha) is not None:
                raise InputError("alpha must not be rational in case 2S", field="alpha")
            is_generator = any(alpha == field.gen(name) for name in field.names)
            if not (is_generator or self.irrational):
                raise InputError(
                    "alpha must be a generator or be marked irrational", field="alpha"
                )

    # Constructors

    @classmethod
    def shift(cls, field: ConstantsField) -> "OperatorCase":
        return cls(CaseKind.S, field)

    @classmethod
    def q_dilation(cls, field: ConstantsField, q: Any) -> "OperatorCase":
        return cls(CaseKind.Q, field, q=q)

    @classmethod
    def mahler(cls, field: ConstantsField, q: int) -> "OperatorCase":
        return cls(CaseKind.M, field, q=q)

    @classmethod
    def two_shift(cls, field: ConstantsField, alpha: Any, irrational: bool = False) -> "OperatorCase":
        return cls(CaseKind.TWO_S, field, alpha=alpha, irrational=irrational)

    @classmethod
    def two_q(cls, field: ConstantsField, q1: Any, q2: Any) -> "OperatorCase":
        return cls(CaseKind.TWO_Q, field, q1=q1, q2=q2)

    @classmethod
    def two_mahler(cls, field: ConstantsField, p: int, q: int) -> "OperatorCase":
        return cls(CaseKind.TWO_M, field, q1=p, q2=q)

    # Properties

    @property
    def is_two_sigma(self) -> bool:
        return self.kind in (CaseKind.TWO_S, CaseKind.TWO_Q, CaseKind.TWO_M)

    @property
    def has_derivation(self) -> bool:
        return not self.is_two_sigma

    @property
    def is_mahler(self) -> bool:
        return self.kind in (CaseKind.M, CaseKind.TWO_M)

    @property
    def sigma_invertible(self) -> bool:
        return not self.is_mahler

    @property
    def mu(self) -> Any:
        """The commutation factor: delta sigma = mu sigma delta."""
        if self.is_two_sigma:
            raise NoDerivationError(self.kind.value)
        if self.kind == CaseKind.M:
            return self.field.rational(self.q)
        return self.field.one

    def mahler_exponent(self, index: int = 1) -> int:
        """The integer q (or q_index) of a Mahler case."""
        if self.kind == CaseKind.M:
            return self.q
        if self.kind == CaseKind.TWO_M:
            return self.q1 if index == 1 else self.q2
        raise OperatorError(f"case {self.kind.value} is not a Mahler case")

    def dilation(self, index: int = 1) -> Any:
        """The q (or q_index) of a dilation case."""
        if self.kind == CaseKind.Q:
            return self.q
        if self.kind == CaseKind.TWO_Q:
            return self.q1 if index == 1 else self.q2
        raise OperatorError(f"case {self.kind.value} is not a dilation case")

    def shift_amount(self, index: int = 1) -> Any:
        """The shift (1 or alpha) of a shift case."""
        if self.kind == CaseKind.S:
            return self.field.one
        if self.kind == CaseKind.TWO_S:
            return self.field.one if index == 1 else self.alpha
        raise OperatorError(f"case {self.kind.value} is not a shift case")

    def check_index(self, index: int) -> None:
        if index not in (1, 2) or (index == 2 and not self.is_two_sigma):
            raise OperatorError(f"no sigma_{index} in case {self.kind.value}")

    def describe(self) -> str:
        if self.kind == CaseKind.S:
            return "S"
        if self.kind == CaseKind.Q:
            return f"Q(q={self.field.format(self.q)})"
        if self.kind == CaseKind.M:
            return f"M(q={self.q})"
        if self.kind == CaseKind.TWO_S:
            return f"2S(alpha={self.field.format(self.alpha)})"
        if self.kind == CaseKind.TWO_Q:
            return f"2Q(q1={self.field.format(self.q1)}, q2={self.field.format(self.q2)})"
        return f"2M(p={self.q1}, q={self.q2})"


# Actions on rational functions


def sigma_of(f: RatFunc, case: OperatorCase, index: int = 1) -> RatFunc:
    """Apply sigma (or sigma_index in two-sigma cases) to a rational function.

    Args:
        f: Rational function.
        case: Operator case.
        index: 1 or 2.

    Returns:
        f(x + 1), f(q x) or f(x**q) according to the case.
    """
    case.check_index(index)
    if case.kind in (CaseKind.S, CaseKind.TWO_S):
        return f.substitute_shift(case.shift_amount(index))
    if case.kind in (CaseKind.Q, CaseKind.TWO_Q):
        return f.substitute_scale(case.dilation(index))
    return f.substitute_power(case.mahler_exponent(index))


def sigma_power_of(f: RatFunc, case: OperatorCase, index: int, k: int) -> RatFunc:
    """sigma_index**k of f; negative k uses the inverse where it exists."""
    if k < 0:
        for _ in range(-k):
            f = sigma_inverse_of(f, case, index)
        return f
    case.check_index(index)
    if k == 0:
        return f
    if case.kind in (CaseKind.S, CaseKind.TWO_S):
        return f.substitute_shift(case.shift_amount(index) * k)
    if case.kind in (CaseKind.Q, CaseKind.TWO_Q):
        return f.substitute_scale(case.field.power(case.dilation(index), k))
    return f.substitute_power(case.mahler_exponent(index) ** k)


def sigma_inverse_of(f: RatFunc, case: OperatorCase, index: int = 1) -> RatFunc:
    """Inverse substitution; Mahler sigmas are not invertible on rational functions."""
    case.check_index(index)
    if case.is_mahler:
        raise SigmaNotInvertibleError(case.kind.value)
    if case.kind in (CaseKind.S, CaseKind.TWO_S):
        return f.substitute_shift(-case.shift_amount(index))
    return f.substitute_scale(case.field.one / case.dilation(index))


def delta_of(f: RatFunc, case: OperatorCase) -> RatFunc:
    """Apply the derivation: d/dx in case S, x d/dx in cases Q and M."""
    if case.is_two_sigma:
        raise NoDerivationError(case.kind.value)
    if case.kind == CaseKind.S:
        return f.diff()
    return f.theta()


@dataclass(frozen=True)
class CommutationWitness:
    """Both sides of delta(sigma f) = mu sigma(delta f) and the factor mu."""

    mu: Any
    lhs: RatFunc
    rhs: RatFunc


def check_commutation(case: OperatorCase, f: RatFunc) -> CommutationWitness:
    """Self-test of the operator wiring on one rational function.

    Raises:
        InternalConsistencyError: The two sides differ.
    """
    if case.is_two_sigma:
        raise NoDerivationError(case.kind.value)
    mu = case.mu
    lhs = delta_of(sigma_of(f, case), case)
    rhs = sigma_of(delta_of(f, case), case) * mu
    if lhs != rhs:
        logger.error(f"Commutation failed in case {case.describe()} for f = {f}")
        raise InternalConsistencyError(
            f"delta sigma != mu sigma delta in case {case.describe()}: {lhs} vs {rhs}"
        )
    return CommutationWitness(mu=mu, lhs=lhs, rhs=rhs)


# Actions on series


def sigma_series(s: PuiseuxSeriesTrunc, case: OperatorCase, index: int = 1) -> PuiseuxSeriesTrunc:
    """Apply sigma_index to a truncated series at 0 or at infinity."""
    case.check_index(index)
    at_infinity = s.point == SeriesPoint.INFINITY
    if case.is_mahler:
        return s.substitute_power(case.mahler_exponent(index))
    if case.kind in (CaseKind.Q, CaseKind.TWO_Q):
        q = case.dilation(index)
        return s.substitute_scale(case.field.one / q if at_infinity else q)
    if not at_infinity:
        raise OperatorError("shift operators act on series only at infinity")
    return s.shift_at_infinity(case.shift_amount(index))


def delta_series(s: PuiseuxSeriesTrunc, case: OperatorCase) -> PuiseuxSeriesTrunc:
    """Apply the derivation to a truncated series at 0 or at infinity."""
    if case.is_two_sigma:
        raise NoDerivationError(case.kind.value)
    at_infinity = s.point == SeriesPoint.INFINITY
    if case.kind == CaseKind.S:
        if not at_infinity:
            return s.derivative()
        # d/dx = -t**2 d/dt
        return -(s.theta().shift(s.ramification))
    if at_infinity:
        return -s.theta()
    return s.theta()
