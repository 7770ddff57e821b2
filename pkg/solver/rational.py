"""Guess-and-verify rational solutions of one or two scalar operators.

A seed is extended by the first operator, cross-checked against the second, reconstructed by
Pade approximation and accepted only after exact substitution into every operator. Failure to
reconstruct doubles the series order (and the degree bound with it) up to the cap; running out
of budget is a "not-certified" answer, never a claim of irrationality.
"""

from dataclasses import dataclass
from typing import Sequence

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import (
    InconsistentSeedError,
    InputError,
    InsufficientOrderError,
    OperatorError,
    TruncationInsufficientError,
)
from core.models import ReconstructionBudget
from core.types import CaseKind, OperatorKind, Verdict
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc, expand_series
from operators.apply import apply_to_series, multiply_by_ratfunc
from operators.scalar import ScalarOperator
from utils.helpers import order_doubling

from .extend import extend_series_by_operator
from .pade import pade_reconstruct

logger = get_logger(__name__)


@dataclass(frozen=True)
class RationalSolution:
    """Outcome of solve_rational: a certified value or the budget that was exhausted."""

    verdict: Verdict
    value: RatFunc | None
    order: int
    degree: int

    @property
    def certified(self) -> bool:
        return self.verdict == Verdict.CERTIFIED


def denominator_candidates(L: ScalarOperator) -> RatFunc:
    """Candidate denominator for rational solutions of a case-S differential operator.

    Poles of a rational solution lie among the zeros of the leading coefficient, so the
    squarefree part of its numerator, raised to the operator order, is used as a multiplier hint.
    """
    if L.case.kind != CaseKind.S or L.kind != OperatorKind.DELTA:
        raise OperatorError("denominator candidates are defined for case-S delta-operators")
    lead = L.leading
    field = L.field
    if lead.num.degree() <= 0:
        return RatFunc.one(field)
    squarefree = RatFunc(field, lead.num.sqf_part())
    return squarefree**L.order


def _first_nonzero(s: PuiseuxSeriesTrunc) -> int | None:
    return None if s.is_zero() else s.valuation


def _cross_check(op: ScalarOperator, s: PuiseuxSeriesTrunc) -> None:
    residual = apply_to_series(op, s)
    index = _first_nonzero(residual)
    if index is not None:
        logger.error(f"Second operator rejects the extended series at index {index}")
        raise InconsistentSeedError(index, "cross-check against the second operator failed")


def _schedule(budget: ReconstructionBudget, order: int) -> int:
    """Degree bound growing in step with the order, capped by the overdetermination bound."""
    settings = get_settings()
    grown = budget.max_degree * order // budget.order
    return max(0, min(grown, order // 2 - 1, settings.pade_max_degree))


def solve_rational(
    ops: ScalarOperator | Sequence[ScalarOperator],
    seed: PuiseuxSeriesTrunc,
    budget: ReconstructionBudget | None = None,
    use_denominator_hint: bool = False,
) -> RationalSolution:
    """Search for a rational common solution of one or two operators extending a seed.

    Args:
        ops: One operator or a pair over the same case.
        seed: Leading coefficients of the sought solution.
        budget: Starting order, degree bound and order cap; defaults come from the settings.
        use_denominator_hint: In case S, multiply by the candidate denominator before Pade.

    Returns:
        CERTIFIED with the verified value, or NOT_CERTIFIED once the cap is reached.

    Raises:
        InconsistentSeedError: The seed contradicts an operator.
        ResonanceError: The extension recurrence stalls past the seed.
    """
    ops = (ops,) if isinstance(ops, ScalarOperator) else tuple(ops)
    if not 1 <= len(ops) <= 2:
        raise InputError(f"expected one or two operators, got {len(ops)}", field="ops")
    if len(ops) == 2 and ops[0].case != ops[1].case:
        raise InputError("operators belong to different cases", field="ops")

    settings = get_settings()
    if budget is None:
        order = settings.default_order
        budget = ReconstructionBudget(
            order=order,
            max_degree=min(settings.pade_start_degree, order // 2 - 1),
            max_order=settings.max_order,
        )

    hint = None
    if use_denominator_hint:
        deltas = [op for op in ops if op.kind == OperatorKind.DELTA]
        if deltas and deltas[0].case.kind == CaseKind.S:
            hint = denominator_candidates(deltas[0])
            logger.info(f"Using candidate denominator {hint}")

    attempts: list[tuple[int, int]] = []

    @order_doubling(exceptions=(InsufficientOrderError,))
    def attempt(order: int) -> RatFunc:
        degree = _schedule(budget, order)
        attempts.append((order, degree))
        extended = extend_series_by_operator(ops[0], seed, order)
        for other in ops[1:]:
            _cross_check(other, extended)
        target = multiply_by_ratfunc(hint, extended) if hint is not None else extended
        candidate = pade_reconstruct(target, degree)
        if candidate is None:
            raise InsufficientOrderError(f"no candidate of degree <= {degree}", order=order)
        if hint is not None:
            candidate = candidate / hint
        if not all(op.annihilates(candidate) for op in ops):
            raise InsufficientOrderError("candidate fails exact substitution", order=order)
        if not expand_series(candidate, seed.point, seed.order, seed.ramification).agrees_with(seed):
            raise InsufficientOrderError("candidate disagrees with the seed", order=order)
        return candidate

    try:
        value = attempt(order=budget.order, max_order=budget.max_order)
    except TruncationInsufficientError as e:
        order, degree = attempts[-1] if attempts else (budget.order, budget.max_degree)
        logger.warning(f"No certified rational solution: {e}")
        return RationalSolution(Verdict.NOT_CERTIFIED, None, order, degree)

    order, degree = attempts[-1]
    logger.info(f"Certified rational solution {value} at order {order}, degree bound {degree}")
    return RationalSolution(Verdict.CERTIFIED, value, order, degree)
