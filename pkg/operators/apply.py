"""Applying scalar operators to rational functions, truncated series and closed forms."""

from fractions import Fraction
from typing import overload

from config.logging_config import get_logger
from core.exceptions import InsufficientOrderError, OperatorError
from core.types import OperatorKind, SeriesPoint
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc, expand_series

from .cases import delta_series, sigma_series
from .closed_form import ClosedFormSolution
from .scalar import ScalarOperator

logger = get_logger(__name__)


def _act_series(op: ScalarOperator, s: PuiseuxSeriesTrunc) -> PuiseuxSeriesTrunc:
    if op.kind == OperatorKind.DELTA:
        return delta_series(s, op.case)
    return sigma_series(s, op.case, op.sigma_index)


def _coefficient_valuation(c: RatFunc, s: PuiseuxSeriesTrunc) -> int:
    """Valuation of c at the series' point, in units of the series' ramification."""
    v = c.valuation() if s.point == SeriesPoint.ZERO else c.valuation_at_infinity()
    return v * s.ramification


def multiply_by_ratfunc(c: RatFunc, s: PuiseuxSeriesTrunc) -> PuiseuxSeriesTrunc:
    """c * s with c expanded just far enough not to lower the product's order."""
    if not c:
        return PuiseuxSeriesTrunc.zero(s.field, s.order, s.ramification, s.point)
    vc = _coefficient_valuation(c, s)
    needed = s.order + vc - s.valuation
    expansion = expand_series(c, s.point, max(needed, vc), s.ramification)
    return expansion * s


def apply_to_series(op: ScalarOperator, s: PuiseuxSeriesTrunc) -> PuiseuxSeriesTrunc:
    """sum_i c_i op**i(s) with an honest truncation order.

    Raises:
        InsufficientOrderError: The truncation is too short for the result to carry even its
            lowest possible coefficient.
    """
    current = s
    total = None
    floor: Fraction | None = None
    for i, c in enumerate(op.coeffs):
        if i:
            current = _act_series(op, current)
        if not c:
            continue
        term = multiply_by_ratfunc(c, current)
        total = term if total is None else total + term
        if not current.is_zero():
            v = c.valuation() if s.point == SeriesPoint.ZERO else c.valuation_at_infinity()
            lowest = v + current.valuation_exponent
            floor = lowest if floor is None else min(floor, lowest)
    if floor is not None and total.precision < floor:
        logger.error(f"Operator of order {op.order} exhausts a series truncated at {s.order}")
        raise InsufficientOrderError(
            f"result known only to index {total.order}, below its first possible term {floor}",
            order=s.order,
        )
    return total


def apply_to_closed_form(op: ScalarOperator, cf: ClosedFormSolution) -> ClosedFormSolution:
    """sum_i c_i op**i(cf), computed term by term."""
    if cf.case != op.case:
        raise OperatorError("closed form and operator belong to different cases")
    result = ClosedFormSolution(op.case, (), cf.log_steps)
    current = cf
    for i, c in enumerate(op.coeffs):
        if i:
            current = current.delta() if op.kind == OperatorKind.DELTA else current.sigma(op.sigma_index)
        if c:
            result = result + current.scale(c)
    return result


@overload
def apply_operator(op: ScalarOperator, target: RatFunc) -> RatFunc: ...


@overload
def apply_operator(op: ScalarOperator, target: PuiseuxSeriesTrunc) -> PuiseuxSeriesTrunc: ...


@overload
def apply_operator(op: ScalarOperator, target: ClosedFormSolution) -> ClosedFormSolution: ...


def apply_operator(op, target):
    """Apply a scalar operator to a rational function, a truncated series or a closed form.

    Args:
        op: Scalar operator.
        target: Value of any supported kind.

    Returns:
        A value of the same kind.
    """
    if isinstance(target, RatFunc):
        return op.apply_ratfunc(target)
    if isinstance(target, PuiseuxSeriesTrunc):
        return apply_to_series(op, target)
    if isinstance(target, ClosedFormSolution):
        return apply_to_closed_form(op, target)
    raise OperatorError(f"cannot apply an operator to {type(target).__name__}")
