"""Power-series solutions of y(x**p) = A(x) (y(x) + r(x)) by fixed-point iteration.

Each pass of ``y <- A**-1 y(x**p) - r`` turns an error O(x**M) into O(x**(p M + s)) with s the
valuation of A**-1, so a seed exact below M converges whenever p M + s > M.
"""

from typing import Sequence

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import (
    InconsistentSeedError,
    InputError,
    InsufficientSeedError,
    InternalConsistencyError,
    ResourceCapError,
)
from core.types import SeriesPoint
from exact.matrix import RatMatrix, invert_matrix
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc, expand_series

logger = get_logger(__name__)


def _first_difference(a: PuiseuxSeriesTrunc, b: PuiseuxSeriesTrunc, top: int) -> int | None:
    low = min(a.valuation, b.valuation)
    for i in range(low, top + 1):
        if a.coefficient(i) != b.coefficient(i):
            return i
    return None


def _combine(
    matrix: RatMatrix,
    vector: Sequence[PuiseuxSeriesTrunc],
    order: int,
) -> list[PuiseuxSeriesTrunc]:
    field = matrix.field
    out = []
    for i in range(matrix.n):
        acc = PuiseuxSeriesTrunc.zero(field, order)
        for j in range(matrix.n):
            if matrix[i, j]:
                acc = acc + expand_series(matrix[i, j], SeriesPoint.ZERO, order) * vector[j]
        out.append(acc)
    return out


def mahler_series_solve(
    A: RatMatrix,
    p: int,
    seed: Sequence[PuiseuxSeriesTrunc],
    order: int,
    rhs: Sequence[RatFunc] | None = None,
) -> list[PuiseuxSeriesTrunc]:
    """Extend a seed to a series solution of y(x**p) = A(x)(y(x) + r(x)).

    Args:
        A: Invertible square matrix.
        p: Mahler exponent, at least 2.
        seed: One series per component, all exact up to a common index M - 1.
        order: Index N up to which the solution is returned.
        rhs: Optional inhomogeneous term r.

    Returns:
        The solution components, exact up to index N.

    Raises:
        InsufficientSeedError: p M + s <= M, so the iteration does not contract.
        InconsistentSeedError: The seed disagrees with its own image under the iteration.
    """
    field = A.field
    n = A.n
    if len(seed) != n:
        raise InputError(f"seed has {len(seed)} components, system has {n}", field="seed")
    if any(s.ramification != 1 or s.point != SeriesPoint.ZERO for s in seed):
        raise InputError("seed components must be integer-exponent series at 0", field="seed")
    rhs = list(rhs) if rhs is not None else [RatFunc.zero(field)] * n
    if len(rhs) != n:
        raise InputError(f"right-hand side has {len(rhs)} components, system has {n}", field="rhs")

    A_inv = invert_matrix(A)
    s = A_inv.valuation()
    s = 0 if s is None else s
    known = min(c.order for c in seed) + 1
    if p * known + s <= known:
        logger.error(f"Seed exact below {known} is too short for valuation {s} and p = {p}")
        raise InsufficientSeedError(
            f"seed must be exact below M with {p}*M + {s} > M", valuation=s
        )

    low = min([c.valuation for c in seed if not c.is_zero()] + [0])
    y = [c.truncate(known - 1) for c in seed]
    budget = get_settings().step_budget
    steps = 0
    while known <= order:
        steps += 1
        if steps > budget:
            raise ResourceCapError("series iteration exceeded the step budget", limit=budget)
        work = min(p * known + s - 1, order)
        shifted = [c.substitute_power(p) for c in y]
        image = _combine(A_inv, shifted, work + p * max(0, -low) + max(0, -s))
        new = [
            (image[i] - expand_series(rhs[i], SeriesPoint.ZERO, work)).truncate(work)
            for i in range(n)
        ]
        for i in range(n):
            index = _first_difference(new[i], y[i], known - 1)
            if index is not None:
                logger.error(f"Seed component {i} disagrees with the iteration at index {index}")
                raise InconsistentSeedError(index, f"seed component {i} is not a solution prefix")
        y = new
        known = work + 1

    y = [c.truncate(order) for c in y]
    residual = [
        shifted - lhs
        for shifted, lhs in zip(
            (c.substitute_power(p) for c in y),
            _combine(A, [c + expand_series(r, SeriesPoint.ZERO, order) for c, r in zip(y, rhs)], order),
        )
    ]
    if not all(e.truncate(order).is_zero() for e in residual):
        raise InternalConsistencyError("series solution fails the Mahler equation")
    logger.info(f"Mahler series solution of dimension {n} extended to order {order} in {steps} passes")
    return y
