"""Annihilator pairs of closed-form solutions.

Rational coefficients are cleared first: with p a common denominator, every term of p f has a
polynomial coefficient, and K o p annihilates f whenever K annihilates p f. Constant-coefficient
factors then handle each exponent class:

* (delta - beta)**(J+1) kills x**beta log(x)**j for j <= J (cases Q, M);
* (delta - lambda)**(D+1) kills P(x) exp(lambda x) for deg P <= D (case S);
* (sigma - c)**(J+1) kills the same terms with c the sigma-multiplier (cases S, Q, 2S, 2Q).

Mahler sigmas move exponents, so a single monomial uses the relation
sigma**m f = q**(j (m - n)) x**r sigma**n f with r = (q**m - q**n) beta an integer, and anything
else is handled by eliminating sigma-iterates over the rational functions.
"""

from fractions import Fraction
from math import floor
from typing import Any

from config.logging_config import get_logger
from core.exceptions import (
    InputError,
    InternalConsistencyError,
    OperatorError,
    UndeclaredConstantError,
)
from core.types import CaseKind, OperatorKind
from exact.matrix import RatMatrix
from exact.ratfunc import RatFunc
from operators.apply import apply_operator
from operators.cases import OperatorCase
from operators.closed_form import ClosedFormSolution, ClosedFormTerm
from operators.scalar import ScalarOperator

logger = get_logger(__name__)

_MAX_MAHLER_POWER = 64
_MAX_ELIMINATION_ORDER = 64


def _common_denominator(cf: ClosedFormSolution) -> RatFunc:
    ring = cf.case.field.poly_ring
    den = ring.one
    for t in cf.terms:
        den = den.lcm(t.coeff.den)
    return RatFunc(cf.case.field, den)


def _product(factors: list[ScalarOperator]) -> ScalarOperator:
    result = factors[0]
    for factor in factors[1:]:
        result = result.compose(factor)
    return result


def _exponent_classes(g: ClosedFormSolution) -> list[tuple[Any, int, int, ClosedFormTerm]]:
    """(beta, k, log_power, term) for every monomial x**beta of a polynomial-coefficient form."""
    out = []
    for t in g.terms:
        for k, c in enumerate(t.coeff.numerator_coefficients()):
            if c:
                out.append((t.exponent + k, k, t.log_power, t))
    return out


def _rate_degrees(g: ClosedFormSolution) -> dict[Any, tuple[int, ClosedFormTerm]]:
    """Largest polynomial degree per exponential rate (case S and 2S)."""
    out: dict[Any, tuple[int, ClosedFormTerm]] = {}
    for t in g.terms:
        degree = t.coeff.num.degree()
        if t.rate not in out or out[t.rate][0] < degree:
            out[t.rate] = (degree, t)
    return out


def _delta_annihilator(cf: ClosedFormSolution, g: ClosedFormSolution) -> ScalarOperator:
    case = cf.case
    kind = OperatorKind.DELTA
    if case.kind == CaseKind.S:
        factors = [
            ScalarOperator.power_of(case, kind, rate, degree + 1)
            for rate, (degree, _) in _rate_degrees(g).items()
        ]
        return _product(factors)
    powers: dict[Any, int] = {}
    for beta, _, j, _ in _exponent_classes(g):
        powers[beta] = max(powers.get(beta, 0), j)
    factors = [ScalarOperator.power_of(case, kind, beta, j + 1) for beta, j in powers.items()]
    return _product(factors)


def _shift_multiplier(case: OperatorCase, term: ClosedFormTerm, index: int) -> Any:
    field = case.field
    if not term.rate:
        return field.one
    m = term.multipliers[index - 1]
    if m is None:
        raise UndeclaredConstantError(
            f"exp({field.format(term.rate)})"
            if index == 1
            else f"exp({field.format(term.rate)}*{field.format(case.alpha)})"
        )
    return m


def _dilation_multiplier(case: OperatorCase, term: ClosedFormTerm, k: int, index: int) -> Any:
    """sigma_index(x**(alpha + k)) / x**(alpha + k) for the term exponent alpha."""
    field = case.field
    q = case.dilation(index)
    beta = term.exponent + k
    integer = field.as_integer(beta)
    if integer is not None:
        return field.power(q, integer)
    m = term.multipliers[index - 1]
    if m is None:
        raise UndeclaredConstantError(f"{field.format(q)}^({field.format(term.exponent)})")
    return m * field.power(q, k)


def _sigma_annihilator_product(
    cf: ClosedFormSolution, g: ClosedFormSolution, index: int, kind: OperatorKind
) -> ScalarOperator:
    case = cf.case
    if case.kind in (CaseKind.S, CaseKind.TWO_S):
        factors = [
            ScalarOperator.power_of(case, kind, _shift_multiplier(case, t, index), degree + 1)
            for _, (degree, t) in _rate_degrees(g).items()
        ]
        return _product(factors)
    powers: dict[Any, int] = {}
    for _, k, j, t in _exponent_classes(g):
        c = _dilation_multiplier(case, t, k, index)
        powers[c] = max(powers.get(c, 0), j)
    factors = [ScalarOperator.power_of(case, kind, c, j + 1) for c, j in powers.items()]
    return _product(factors)


def _rational_exponent(case: OperatorCase, term: ClosedFormTerm) -> Fraction:
    value = case.field.as_rational(term.exponent)
    if value is None:
        raise OperatorError(
            f"irrational case-{case.kind.value} exponent {case.field.format(term.exponent)}"
        )
    return value


def _mahler_monomial(cf: ClosedFormSolution, index: int, kind: OperatorKind) -> ScalarOperator:
    """sigma**m - q**(j (m - n)) x**r sigma**n for c x**beta log(x)**j, smallest m then n."""
    case = cf.case
    field = case.field
    term = cf.terms[0]
    beta = _rational_exponent(case, term) + term.coeff.valuation()
    j = term.log_power
    q = case.mahler_exponent(index)
    for m in range(2, _MAX_MAHLER_POWER + 1):
        for n in range(1, m):
            r = (q**m - q**n) * beta
            if r.denominator != 1:
                continue
            zero = RatFunc.zero(field)
            coeffs = [zero] * (m + 1)
            coeffs[m] = RatFunc.one(field)
            coeffs[n] = -RatFunc.monomial(field, int(r), field.power(field.rational(q), j * (m - n)))
            logger.debug(f"Mahler monomial relation with m={m}, n={n}, r={r}")
            return ScalarOperator.build(case, kind, coeffs)
    raise OperatorError(f"no Mahler relation with powers up to {_MAX_MAHLER_POWER}")


def _mahler_coordinates(cf: ClosedFormSolution) -> dict[tuple[Fraction, int], RatFunc]:
    """Coefficients against x**rho log(x)**j with rho the fractional part of each exponent."""
    field = cf.case.field
    coords: dict[tuple[Fraction, int], RatFunc] = {}
    for t in cf.terms:
        exponent = _rational_exponent(cf.case, t)
        rho = exponent - floor(exponent)
        shift = int(exponent - rho)
        key = (rho, t.log_power)
        coords[key] = coords.get(key, RatFunc.zero(field)) + t.coeff * RatFunc.monomial(field, shift)
    return coords


def _mahler_elimination(cf: ClosedFormSolution, index: int, kind: OperatorKind) -> ScalarOperator:
    """First RatFunc-linear relation among f, sigma f, sigma**2 f, ..."""
    case = cf.case
    field = case.field
    zero = RatFunc.zero(field)
    vectors = [_mahler_coordinates(cf)]
    current = cf
    for order in range(1, _MAX_ELIMINATION_ORDER + 1):
        current = current.sigma(index)
        vectors.append(_mahler_coordinates(current))
        keys = sorted({key for v in vectors for key in v})
        matrix = RatMatrix(field, [[v.get(key, zero) for v in vectors] for key in keys])
        kernel = matrix.nullspace()
        if not kernel:
            continue
        relation = kernel[0]
        lead = relation[-1]
        logger.debug(f"Mahler elimination found a relation of order {order}")
        return ScalarOperator.build(case, kind, [c / lead for c in relation])
    raise OperatorError(f"no sigma relation up to order {_MAX_ELIMINATION_ORDER}")


def _sigma_annihilator(
    cf: ClosedFormSolution, p: RatFunc, g: ClosedFormSolution, index: int
) -> ScalarOperator:
    case = cf.case
    kind = OperatorKind.SIGMA2 if index == 2 else OperatorKind.SIGMA1
    if case.is_mahler:
        if len(cf.terms) == 1 and cf.terms[0].coeff.is_laurent_monomial():
            return _mahler_monomial(cf, index, kind)
        return _mahler_elimination(cf, index, kind)
    return _sigma_annihilator_product(cf, g, index, kind).compose_multiplier(p)


def _verified(op: ScalarOperator, cf: ClosedFormSolution) -> ScalarOperator:
    if not apply_operator(op, cf).is_zero():
        logger.error(f"Constructed annihilator {op} does not annihilate {cf}")
        raise InternalConsistencyError("constructed annihilator does not annihilate the closed form")
    return op


def annihilators_of_closed_form(
    cf: ClosedFormSolution, case: OperatorCase
) -> tuple[ScalarOperator, ScalarOperator]:
    """Construct a compatible pair of scalar annihilators of a closed form.

    Args:
        cf: Nonzero closed-form solution over ``case``.
        case: Operator case.

    Returns:
        (delta-operator, sigma-operator), or (sigma_1-operator, sigma_2-operator) in two-sigma
        cases. Both are checked to annihilate ``cf`` exactly.

    Raises:
        UndeclaredConstantError: A needed multiplier or log step is not declared.
        OperatorError: A Mahler exponent is irrational.
    """
    if cf.case != case:
        raise InputError("closed form belongs to a different case", field="case")
    if cf.is_zero():
        raise InputError("the zero closed form has no annihilator of order 1", field="cf")
    if case.is_mahler:
        for t in cf.terms:
            _rational_exponent(case, t)

    p = _common_denominator(cf)
    g = cf.scale(p)
    if case.is_two_sigma:
        first = _sigma_annihilator(cf, p, g, 1)
        second = _sigma_annihilator(cf, p, g, 2)
    else:
        first = _delta_annihilator(cf, g).compose_multiplier(p)
        second = _sigma_annihilator(cf, p, g, 1)
    first, second = first.primitive(), second.primitive()
    logger.info(f"Annihilators of orders {first.order} and {second.order} in case {case.kind.value}")
    return _verified(first, cf), _verified(second, cf)
