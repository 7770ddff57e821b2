"""Scalar skew operators sum_i c_i op**i with rational-function coefficients."""

from dataclasses import dataclass
from math import comb
from typing import Any, Iterable, Sequence

from config.logging_config import get_logger
from core.exceptions import AlreadyHomogeneousError, InputError, OperatorError, SigmaNotInvertibleError
from core.types import OperatorKind
from exact.ratfunc import RatFunc

from .cases import OperatorCase, delta_of, sigma_inverse_of, sigma_of, sigma_power_of

logger = get_logger(__name__)


def _sigma_index(kind: OperatorKind) -> int:
    return 2 if kind == OperatorKind.SIGMA2 else 1


@dataclass(frozen=True)
class ScalarOperator:
    """Operator sum_i coeffs[i] * op**i where op is delta, sigma1 or sigma2."""

    case: OperatorCase
    kind: OperatorKind
    coeffs: tuple[RatFunc, ...]

    def __post_init__(self):
        kind = OperatorKind(self.kind)
        object.__setattr__(self, "kind", kind)
        coeffs = tuple(
            c if isinstance(c, RatFunc) else RatFunc.constant(self.case.field, c)
            for c in self.coeffs
        )
        object.__setattr__(self, "coeffs", coeffs)
        if kind == OperatorKind.DELTA and not self.case.has_derivation:
            raise InputError(f"no delta-operators in case {self.case.kind.value}", field="kind")
        if kind == OperatorKind.SIGMA2 and not self.case.is_two_sigma:
            raise InputError(f"no sigma2-operators in case {self.case.kind.value}", field="kind")
        if len(coeffs) < 2:
            raise InputError("operator order must be at least 1", field="coeffs")
        if not coeffs[-1]:
            raise InputError("leading coefficient must be nonzero", field="coeffs")

    # Construction

    @classmethod
    def build(cls, case: OperatorCase, kind: OperatorKind, coeffs: Iterable[Any]) -> "ScalarOperator":
        """Build from coefficients, dropping vanishing top coefficients first."""
        coeffs = [c if isinstance(c, RatFunc) else RatFunc.constant(case.field, c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        return cls(case, kind, tuple(coeffs))

    @classmethod
    def first_order(cls, case: OperatorCase, kind: OperatorKind, a: Any) -> "ScalarOperator":
        """The operator op - a, annihilating f exactly when op(f) = a f."""
        a = a if isinstance(a, RatFunc) else RatFunc.constant(case.field, a)
        return cls(case, kind, (-a, RatFunc.one(case.field)))

    @classmethod
    def power_of(cls, case: OperatorCase, kind: OperatorKind, root: Any, exponent: int) -> "ScalarOperator":
        """(op - root)**exponent for a constant root."""
        base = cls.first_order(case, kind, root)
        result = base
        for _ in range(exponent - 1):
            result = result.compose(base)
        return result

    # Basic properties

    @property
    def field(self):
        return self.case.field

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> RatFunc:
        return self.coeffs[-1]

    @property
    def trailing(self) -> RatFunc:
        return self.coeffs[0]

    @property
    def sigma_index(self) -> int:
        return _sigma_index(self.kind)

    def is_sigma(self) -> bool:
        return self.kind != OperatorKind.DELTA

    def __str__(self) -> str:
        symbol = {"delta": "delta", "sigma1": "sigma", "sigma2": "sigma2"}[self.kind.value]
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            power = "" if i == 0 else (symbol if i == 1 else f"{symbol}^{i}")
            parts.append(f"({c})" + (f"*{power}" if power else ""))
        return " + ".join(parts)

    # Action on rational functions

    def act(self, f: RatFunc) -> RatFunc:
        """One application of the underlying delta or sigma."""
        if self.kind == OperatorKind.DELTA:
            return delta_of(f, self.case)
        return sigma_of(f, self.case, self.sigma_index)

    def act_on_coefficient(self, c: RatFunc, k: int) -> RatFunc:
        """op**k applied to c."""
        if self.kind != OperatorKind.DELTA:
            return sigma_power_of(c, self.case, self.sigma_index, k)
        for _ in range(k):
            c = delta_of(c, self.case)
        return c

    def apply_ratfunc(self, f: RatFunc) -> RatFunc:
        """Evaluate sum_i c_i op**i(f) exactly."""
        result = RatFunc.zero(self.field)
        current = f
        for i, c in enumerate(self.coeffs):
            if i:
                current = self.act(current)
            if c:
                result = result + c * current
        return result

    def annihilates(self, f: RatFunc) -> bool:
        return not self.apply_ratfunc(f)

    # Operator algebra

    def _with(self, coeffs: Sequence[RatFunc]) -> "ScalarOperator":
        return ScalarOperator.build(self.case, self.kind, coeffs)

    def _check_compatible(self, other: "ScalarOperator") -> None:
        if other.case != self.case or other.kind != self.kind:
            raise OperatorError("operators of different cases or kinds")

    def __add__(self, other: "ScalarOperator") -> "ScalarOperator":
        self._check_compatible(other)
        zero = RatFunc.zero(self.field)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [zero] * (n - len(other.coeffs))
        return self._with([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "ScalarOperator") -> "ScalarOperator":
        return self + other.left_multiply(RatFunc.constant(self.field, -1))

    def left_multiply(self, h: Any) -> "ScalarOperator":
        """h * op for a rational function h."""
        h = h if isinstance(h, RatFunc) else RatFunc.constant(self.field, h)
        if not h:
            raise OperatorError("left multiplication by zero")
        return self._with([h * c for c in self.coeffs])

    def compose_multiplier(self, p: Any) -> "ScalarOperator":
        """The operator f -> op(p f).

        sigma**i o p = sigma**i(p) sigma**i; delta**i o p = sum_k C(i, k) delta**(i-k)(p) delta**k.
        """
        p = p if isinstance(p, RatFunc) else RatFunc.constant(self.field, p)
        zero = RatFunc.zero(self.field)
        if self.kind != OperatorKind.DELTA:
            return self._with([c * self.act_on_coefficient(p, i) for i, c in enumerate(self.coeffs)])
        derivatives = [p]
        for _ in range(self.order):
            derivatives.append(delta_of(derivatives[-1], self.case))
        out = [zero] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            for k in range(i + 1):
                d = derivatives[i - k]
                if d:
                    out[k] = out[k] + c * d * comb(i, k)
        return self._with(out)

    def compose(self, other: "ScalarOperator") -> "ScalarOperator":
        """self o other."""
        self._check_compatible(other)
        zero = RatFunc.zero(self.field)
        out = [zero] * (self.order + other.order + 1)
        for j, c in enumerate(other.coeffs):
            if not c:
                continue
            partial = self.compose_multiplier(c)
            for i, d in enumerate(partial.coeffs):
                out[i + j] = out[i + j] + d
        return self._with(out)

    def shift_left(self) -> "ScalarOperator":
        """op o self, i.e. the operator f -> op(self(f))."""
        if self.kind == OperatorKind.DELTA:
            zero = RatFunc.zero(self.field)
            out = [zero] * (len(self.coeffs) + 1)
            for i, c in enumerate(self.coeffs):
                out[i] = out[i] + delta_of(c, self.case)
                out[i + 1] = out[i + 1] + c
            return self._with(out)
        zero = RatFunc.zero(self.field)
        return self._with([zero] + [self.act(c) for c in self.coeffs])

    def monic(self) -> "ScalarOperator":
        """Divide by the leading coefficient."""
        return self.left_multiply(self.leading.inverse())

    def primitive(self) -> "ScalarOperator":
        """Clear denominators, remove the gcd of numerators and make the leading numerator monic."""
        ring = self.field.poly_ring
        denominator = ring.one
        for c in self.coeffs:
            denominator = denominator.lcm(c.den)
        numerators = [(c * RatFunc(self.field, denominator)).num for c in self.coeffs]
        g = ring.zero
        for n in numerators:
            if n:
                g = n if not g else g.gcd(n)
        lead = numerators[-1].exquo(g).LC
        scale = RatFunc(self.field, denominator.mul_ground(self.field.one / lead), g)
        return self.left_multiply(scale)

    def is_primitive(self) -> bool:
        return self == self.primitive()


def homogenize(op: ScalarOperator, rhs: RatFunc) -> ScalarOperator:
    """An order-(n+1) operator annihilating every f with op(f) = rhs.

    For sigma-operators this is sigma(rhs) op - rhs (sigma o op); for delta-operators
    (rhs delta - delta(rhs)) o op. The result is returned in primitive form.

    Raises:
        AlreadyHomogeneousError: rhs is zero.
    """
    if not rhs:
        raise AlreadyHomogeneousError()
    shifted = op.shift_left()
    if op.kind == OperatorKind.DELTA:
        result = shifted.left_multiply(rhs)
        derivative = delta_of(rhs, op.case)
        if derivative:
            result = result - op.left_multiply(derivative)
    else:
        result = op.left_multiply(op.act(rhs)) - shifted.left_multiply(rhs)
    logger.debug(f"Homogenized operator of order {op.order} into order {result.order}")
    return result.primitive()


def strip_trailing_sigma(op: ScalarOperator) -> ScalarOperator:
    """Divide out sigma-powers when the trailing coefficient vanishes (sigma invertible cases).

    sum_{i >= k} c_i sigma**i = sigma**k o sum_i sigma**(-k)(c_i) sigma**(i-k), and for invertible
    sigma both operators have the same solutions.

    Raises:
        SigmaNotInvertibleError: Mahler cases.
        OperatorError: Only one coefficient is nonzero (op annihilates only zero).
    """
    if op.kind == OperatorKind.DELTA:
        raise OperatorError("trailing sigma-powers only make sense for sigma-operators")
    k = next(i for i, c in enumerate(op.coeffs) if c)
    if k == 0:
        return op
    if not op.case.sigma_invertible:
        raise SigmaNotInvertibleError(op.case.kind.value)
    if k == op.order:
        raise OperatorError("operator c*sigma^k annihilates only zero")
    coeffs = [sigma_power_of(c, op.case, op.sigma_index, -k) for c in op.coeffs[k:]]
    return ScalarOperator.build(op.case, op.kind, coeffs)


__all__ = [
    "ScalarOperator",
    "homogenize",
    "strip_trailing_sigma",
    "sigma_inverse_of",
]
