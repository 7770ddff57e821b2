"""x-adic fixed-point gauges for y(x**p) = A(x) y(x).

With A regular at 0 and A(0) invertible the equation ``G(x**p) A(0) = A(x) G(x)`` has a unique
solution G = I + O(x): comparing coefficients of x**k gives

    G_k = A(0)**-1 ([p | k] G_{k/p} A(0) - sum_{i=1..k} A_i G_{k-i}),

so every coefficient is fixed by lower ones. The gauge Z = G**-1 Y then sends A to A(0).
"""

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import (
    InsufficientOrderError,
    InternalConsistencyError,
    ResourceCapError,
    SingularAnchorError,
)
from exact.matrix import ConstMatrix, RatMatrix
from exact.series import PuiseuxSeriesTrunc, SeriesMatrix
from solver.pade import pade_reconstruct
from utils.helpers import order_doubling

logger = get_logger(__name__)


def anchor_matrix(A: RatMatrix) -> ConstMatrix:
    """A(0), checking regularity and invertibility.

    Raises:
        SingularAnchorError: A has a pole at 0 or A(0) is singular.
    """
    v = A.valuation()
    if v is not None and v < 0:
        logger.error("Fixed-point gauge requested for a matrix with a pole at 0")
        raise SingularAnchorError("A has a pole at 0; split the polar part first")
    A0 = A.value_at_zero()
    if not A0.is_invertible():
        logger.error("Fixed-point gauge requested with a singular anchor A(0)")
        raise SingularAnchorError("A(0) is singular")
    return A0


def _series_from_coefficients(field, coefficients: list[ConstMatrix], n: int, order: int) -> SeriesMatrix:
    rows = [
        [PuiseuxSeriesTrunc(field, [G[i, j] for G in coefficients], 0, order) for j in range(n)]
        for i in range(n)
    ]
    return SeriesMatrix(field, rows)


def fixed_point_residual(A: RatMatrix, p: int, G: SeriesMatrix) -> SeriesMatrix:
    """G(x**p) A(0) - A(x) G(x), known to the order of G."""
    order = G.order
    A0 = SeriesMatrix.from_ratmatrix(anchor_matrix(A), order)
    series_A = SeriesMatrix.from_ratmatrix(A, order)
    return (G.substitute_power(p) * A0 - series_A * G).truncate(order)


def fixed_point_gauge(A: RatMatrix, p: int, order: int | None = None) -> SeriesMatrix:
    """Truncated solution G with G(0) = I of G(x**p) = A(x) G(x) A(0)**-1.

    Args:
        A: Square matrix regular at 0 with invertible A(0).
        p: Mahler exponent, at least 2.
        order: Truncation index N (defaults to the configured order).

    Returns:
        Series matrix G exact to index N.
    """
    settings = get_settings()
    order = settings.default_order if order is None else order
    if order > settings.step_budget:
        raise ResourceCapError("fixed-point order exceeds the step budget", limit=settings.step_budget)
    field = A.field
    n = A.n
    A0 = anchor_matrix(A)
    A0_inv = A0.inverse()
    series_A = SeriesMatrix.from_ratmatrix(A, order)
    A_coeffs = [ConstMatrix(field, series_A.coefficient_matrix(i)) for i in range(order + 1)]

    G = [ConstMatrix.identity(field, n)]
    for k in range(1, order + 1):
        acc = ConstMatrix.zeros(field, n)
        if k % p == 0:
            acc = G[k // p] * A0
        for i in range(1, k + 1):
            if not A_coeffs[i].is_zero():
                acc = acc - A_coeffs[i] * G[k - i]
        G.append(A0_inv * acc)

    result = _series_from_coefficients(field, G, n, order)
    if not fixed_point_residual(A, p, result).is_zero():
        raise InternalConsistencyError("fixed-point gauge fails its own residual check")
    logger.debug(f"Fixed-point gauge of dimension {n} computed to order {order}")
    return result


def _degree_for(order: int) -> int:
    settings = get_settings()
    return max(0, min(max(settings.pade_start_degree, order // 4), order // 2 - 1, settings.pade_max_degree))


@order_doubling(exceptions=(InsufficientOrderError,))
def _rational_attempt(A: RatMatrix, p: int, order: int) -> RatMatrix:
    series = fixed_point_gauge(A, p, order)
    degree = _degree_for(order)
    entries = []
    for row in series.rows:
        out = []
        for entry in row:
            g = pade_reconstruct(entry, degree)
            if g is None:
                raise InsufficientOrderError(f"gauge entry not reconstructed at degree {degree}", order=order)
            out.append(g)
        entries.append(out)
    G = RatMatrix(A.field, entries)
    if G.substitute_power(p) * anchor_matrix(A).to_ratmatrix() != A * G:
        raise InsufficientOrderError("reconstructed gauge fails exact substitution", order=order)
    return G


def rational_fixed_point_gauge(
    A: RatMatrix, p: int, order: int | None = None, max_order: int | None = None
) -> RatMatrix:
    """Exact rational G with G(0) = I and G(x**p) A(0) = A(x) G(x).

    The series solution is reconstructed entrywise by Pade approximation and verified by exact
    substitution; the order doubles until verification succeeds or the cap is reached.

    Raises:
        TruncationInsufficientError: No verified gauge up to the order cap.
    """
    logger.info(f"Rational fixed-point gauge for a {A.n}x{A.n} matrix with p = {p}")
    return _rational_attempt(A, p, order=order, max_order=max_order)
