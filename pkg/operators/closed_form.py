"""Closed-form solutions: finite sums of r(x) x**alpha log(x)**j and r(x) exp(lambda x) terms.

Transcendental constants never enter the constants field implicitly. Where sigma needs one it
must be declared on the value:

* ``log_steps[i]`` is sigma_i(log x) - log x for dilation cases (log q_i);
* a term's ``multipliers[i]`` is sigma_i(x**alpha exp(lambda x)) / (x**alpha exp(lambda x))
  whenever it is not computable (q**alpha for non-integer alpha, exp(lambda), exp(lambda alpha)).

Mahler cases need neither: sigma(log x) = q log x and sigma(x**alpha) = x**(q alpha).
"""

from dataclasses import dataclass
from math import comb
from typing import Any, Iterable

from core.exceptions import OperatorError, UndeclaredConstantError
from core.types import CaseKind

from exact.ratfunc import RatFunc

from .cases import OperatorCase, delta_of, sigma_of


@dataclass(frozen=True)
class ClosedFormTerm:
    """coeff * x**exponent * log(x)**log_power * exp(rate x)."""

    coeff: RatFunc
    exponent: Any = None
    log_power: int = 0
    rate: Any = None
    multipliers: tuple[Any, Any] = (None, None)

    def __post_init__(self):
        field = self.coeff.field
        object.__setattr__(
            self, "exponent", field.zero if self.exponent is None else field.convert(self.exponent)
        )
        object.__setattr__(self, "rate", field.zero if self.rate is None else field.convert(self.rate))
        object.__setattr__(
            self,
            "multipliers",
            tuple(None if m is None else field.convert(m) for m in self.multipliers),
        )
        if self.log_power < 0:
            raise OperatorError("negative log power")

    def with_coeff(self, coeff: RatFunc) -> "ClosedFormTerm":
        return ClosedFormTerm(coeff, self.exponent, self.log_power, self.rate, self.multipliers)

    def key(self) -> tuple:
        return (self.exponent, self.log_power, self.rate)


@dataclass(frozen=True)
class ClosedFormSolution:
    """Canonical finite sum of closed-form terms for one operator case."""

    case: OperatorCase
    terms: tuple[ClosedFormTerm, ...] = ()
    log_steps: tuple[Any, Any] = (None, None)

    def __post_init__(self):
        field = self.case.field
        steps = tuple(None if s is None else field.convert(s) for s in self.log_steps)
        object.__setattr__(self, "log_steps", steps)
        object.__setattr__(self, "terms", canonicalize(self.case, self.terms))

    # Construction

    @classmethod
    def rational(cls, case: OperatorCase, f: RatFunc) -> "ClosedFormSolution":
        return cls(case, (ClosedFormTerm(f),))

    @classmethod
    def monomial(
        cls,
        case: OperatorCase,
        exponent: Any,
        log_power: int = 0,
        coeff: RatFunc | None = None,
        log_steps: tuple[Any, Any] = (None, None),
        multipliers: tuple[Any, Any] = (None, None),
    ) -> "ClosedFormSolution":
        """coeff * x**exponent * log(x)**log_power."""
        coeff = coeff if coeff is not None else RatFunc.one(case.field)
        term = ClosedFormTerm(coeff, exponent, log_power, None, multipliers)
        return cls(case, (term,), log_steps)

    @classmethod
    def exponential(
        cls,
        case: OperatorCase,
        rate: Any,
        multipliers: tuple[Any, Any],
        coeff: RatFunc | None = None,
    ) -> "ClosedFormSolution":
        """coeff * exp(rate x) with declared sigma-multipliers."""
        coeff = coeff if coeff is not None else RatFunc.one(case.field)
        return cls(case, (ClosedFormTerm(coeff, None, 0, rate, multipliers),))

    def _with_terms(self, terms: Iterable[ClosedFormTerm]) -> "ClosedFormSolution":
        return ClosedFormSolution(self.case, tuple(terms), self.log_steps)

    # Arithmetic

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ClosedFormSolution") -> "ClosedFormSolution":
        if other.case != self.case:
            raise OperatorError("closed forms of different cases")
        steps = tuple(a if a is not None else b for a, b in zip(self.log_steps, other.log_steps))
        return ClosedFormSolution(self.case, self.terms + other.terms, steps)

    def scale(self, h: RatFunc) -> "ClosedFormSolution":
        """Multiply by a rational function."""
        return self._with_terms(t.with_coeff(t.coeff * h) for t in self.terms)

    def __neg__(self) -> "ClosedFormSolution":
        return self.scale(RatFunc.constant(self.case.field, -1))

    def __sub__(self, other: "ClosedFormSolution") -> "ClosedFormSolution":
        return self + (-other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            piece = f"({t.coeff})"
            if t.exponent:
                piece += f"*x^({self.case.field.format(t.exponent)})"
            if t.log_power:
                piece += f"*log(x)^{t.log_power}"
            if t.rate:
                piece += f"*exp({self.case.field.format(t.rate)}*x)"
            parts.append(piece)
        return " + ".join(parts)

    # Operator actions

    def delta(self) -> "ClosedFormSolution":
        """Apply the derivation term by term."""
        case = self.case
        if case.is_two_sigma:
            raise OperatorError(f"no derivation in case {case.kind.value}")
        out: list[ClosedFormTerm] = []
        for t in self.terms:
            if case.kind == CaseKind.S:
                # d/dx (r exp(lambda x)) = (r' + lambda r) exp(lambda x)
                _require_plain(t, case)
                out.append(t.with_coeff(t.coeff.diff() + t.coeff * t.rate))
                continue
            # x d/dx (r x^a L^j) = (theta r + a r) x^a L^j + j r x^a L^(j-1)
            out.append(t.with_coeff(delta_of(t.coeff, case) + t.coeff * t.exponent))
            if t.log_power:
                out.append(
                    ClosedFormTerm(
                        t.coeff * t.log_power, t.exponent, t.log_power - 1, t.rate, t.multipliers
                    )
                )
        return self._with_terms(out)

    def sigma(self, index: int = 1) -> "ClosedFormSolution":
        """Apply sigma_index term by term."""
        case = self.case
        case.check_index(index)
        field = case.field
        out: list[ClosedFormTerm] = []
        for t in self.terms:
            coeff = sigma_of(t.coeff, case, index)
            if case.kind in (CaseKind.S, CaseKind.TWO_S):
                _require_plain(t, case)
                if t.rate:
                    coeff = coeff * _multiplier(t, index, f"exp({field.format(t.rate)})")
                out.append(t.with_coeff(coeff))
            elif case.kind in (CaseKind.Q, CaseKind.TWO_Q):
                q = case.dilation(index)
                if t.exponent:
                    k = field.as_integer(t.exponent)
                    if k is not None:
                        coeff = coeff * field.power(q, k)
                    else:
                        coeff = coeff * _multiplier(
                            t, index, f"{field.format(q)}^({field.format(t.exponent)})"
                        )
                step = self.log_steps[index - 1]
                if t.log_power and step is None:
                    raise UndeclaredConstantError(f"log({field.format(q)})")
                # (L + step)^j = sum_k C(j, k) step^(j-k) L^k
                for k in range(t.log_power + 1):
                    factor = field.rational(comb(t.log_power, k))
                    if k < t.log_power:
                        factor = factor * field.power(step, t.log_power - k)
                    if not factor:
                        continue
                    out.append(ClosedFormTerm(coeff * factor, t.exponent, k, t.rate, t.multipliers))
            else:
                q = case.mahler_exponent(index)
                if field.as_rational(t.exponent) is None:
                    raise OperatorError("Mahler closed forms need rational exponents")
                factor = field.power(field.rational(q), t.log_power)
                out.append(
                    ClosedFormTerm(coeff * factor, t.exponent * q, t.log_power, t.rate, t.multipliers)
                )
        return self._with_terms(out)


def _require_plain(term: ClosedFormTerm, case: OperatorCase) -> None:
    if term.exponent or term.log_power:
        raise OperatorError(f"case {case.kind.value} closed forms carry no x-powers or logarithms")


def _multiplier(term: ClosedFormTerm, index: int, name: str) -> Any:
    value = term.multipliers[index - 1]
    if value is None:
        raise UndeclaredConstantError(name)
    return value


def _shift_multipliers(case: OperatorCase, multipliers: tuple, k: int) -> tuple:
    """Multipliers of x**(a + k) from those of x**a (dilation cases scale by q_i**k)."""
    if case.kind not in (CaseKind.Q, CaseKind.TWO_Q):
        return multipliers
    out = []
    for i, m in enumerate(multipliers):
        if m is None:
            out.append(None)
        else:
            out.append(m * case.field.power(case.dilation(i + 1), k))
    return tuple(out)


def canonicalize(case: OperatorCase, terms: Iterable[ClosedFormTerm]) -> tuple[ClosedFormTerm, ...]:
    """Merge terms whose exponents differ by integers, drop zeros, sort deterministically.

    The representative exponent of a class is its smallest member; other members fold into the
    coefficient as integer powers of x.
    """
    field = case.field
    terms = [t for t in terms if t.coeff]
    classes: list[list[ClosedFormTerm]] = []
    for t in terms:
        for group in classes:
            head = group[0]
            if head.rate == t.rate and field.as_integer(t.exponent - head.exponent) is not None:
                group.append(t)
                break
        else:
            classes.append([t])

    merged: list[ClosedFormTerm] = []
    for group in classes:
        base = min(
            (t.exponent for t in group),
            key=lambda e: field.as_integer(e - group[0].exponent),
        )
        by_log: dict[int, RatFunc] = {}
        multipliers: tuple = (None, None)
        for t in group:
            k = field.as_integer(t.exponent - base)
            coeff = t.coeff * RatFunc.monomial(field, k) if k else t.coeff
            by_log[t.log_power] = by_log.get(t.log_power, RatFunc.zero(field)) + coeff
            shifted = _shift_multipliers(case, t.multipliers, -k)
            multipliers = tuple(a if a is not None else b for a, b in zip(multipliers, shifted))
        for j, coeff in by_log.items():
            if coeff:
                merged.append(ClosedFormTerm(coeff, base, j, group[0].rate, multipliers))

    merged.sort(
        key=lambda t: (field.sort_key(t.rate), field.sort_key(t.exponent), t.log_power)
    )
    return tuple(merged)
