"""Exact Pade reconstruction of rational functions from truncated series.

The (D, d) Pade system for shifted coefficients c_0, c_1, ... is the Toeplitz block
``sum_{i <= d} q_i c_{k-i} = 0`` for k = D+1 .. K-1; its exact nullspace gives the denominator,
and the numerator is the product Q * c cut at degree D.
"""

from config.logging_config import get_logger
from core.exceptions import InputError
from core.models import ReconstructionBudget
from core.types import SeriesPoint
from exact.matrix import ConstMatrix
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc, expand_series

logger = get_logger(__name__)


def _degree_bound(budget: ReconstructionBudget | int) -> int:
    if isinstance(budget, ReconstructionBudget):
        return budget.max_degree
    if budget < 0:
        raise InputError(f"degree bound must be non-negative, got {budget}", field="budget")
    return budget


def _toeplitz_rows(c: list, D: int, d: int, zero) -> list[list]:
    return [[c[k - i] if k - i >= 0 else zero for i in range(d + 1)] for k in range(D + 1, len(c))]


def pade_reconstruct(s: PuiseuxSeriesTrunc, budget: ReconstructionBudget | int) -> RatFunc | None:
    """Find a rational function of degree <= D whose expansion matches s to its order.

    Args:
        s: Truncated series at 0 or at infinity with integer exponents.
        budget: Degree bound D, directly or as a ReconstructionBudget.

    Returns:
        The reconstructed function, or None when no candidate of degree <= D matches.
    """
    D = _degree_bound(budget)
    series = s.compact()
    if series.ramification != 1:
        raise InputError("Pade reconstruction needs integer exponents", field="s")
    field = series.field
    if series.is_zero():
        return RatFunc.zero(field)

    v = series.valuation
    c = series.dense(v, series.order)
    if len(c) < D + 2:
        logger.warning(f"Pade system with {len(c)} terms is underdetermined for degree {D}")
        return None

    for d in range(D + 1):
        kernel = ConstMatrix(field, _toeplitz_rows(c, D, d, field.zero)).nullspace()
        if not kernel:
            continue
        if len(kernel) > 1:
            logger.debug(f"Pade denominator space of dimension {len(kernel)} at degree {d}")
            return None
        q = kernel[0]
        p = []
        for k in range(D + 1):
            acc = field.zero
            for i in range(min(k, d) + 1):
                if k < len(c) and q[i]:
                    acc += q[i] * c[k - i]
            p.append(acc)
        g = RatFunc.from_coefficients(field, p, q) * RatFunc.monomial(field, v)
        if series.point == SeriesPoint.INFINITY:
            g = g.substitute(RatFunc.monomial(field, -1))
        expansion = expand_series(g, series.point, series.order)
        if not expansion.agrees_with(series):
            logger.debug(f"Pade candidate of denominator degree {d} fails the series check")
            return None
        logger.debug(f"Pade reconstruction succeeded with denominator degree {d}")
        return g
    return None
