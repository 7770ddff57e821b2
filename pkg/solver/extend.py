"""Extension of a seed series by the coefficient recurrence of a scalar operator.

Applying ``sum_i c_i op**i`` to a monomial x**(k/r) gives a leading term at index
``l(k) = min_i (w_i + e_i(k))`` where w_i is the valuation of c_i and e_i(k) the index of the
leading term of op**i(x**(k/r)). l is strictly increasing, so the residual coefficient at l(k)
depends on the unknown a_k only through ``chi(k) * a_k`` and fixes it whenever chi(k) != 0.
"""

from fractions import Fraction
from typing import Any

from sympy.polys.rings import ring

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import (
    InconsistentSeedError,
    InternalConsistencyError,
    OperatorError,
    ResonanceError,
)
from core.types import CaseKind, OperatorKind, SeriesPoint
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc, expand_series
from operators.apply import apply_to_series
from operators.cases import delta_series, sigma_series
from operators.scalar import ScalarOperator

logger = get_logger(__name__)


def _leading_at_point(c: RatFunc, point: SeriesPoint) -> tuple[int, Any]:
    """Valuation and leading coefficient of c at the point."""
    if point == SeriesPoint.ZERO:
        return c.valuation(), c.leading_coefficient_at_zero()
    num, den = c.numerator_coefficients(), c.denominator_coefficients()
    return c.valuation_at_infinity(), num[-1] / den[-1]


def _monomial_image(op: ScalarOperator, i: int, k: int, r: int, point: SeriesPoint) -> tuple[int, Any]:
    """Index and factor of the leading term of op**i applied to x**(k/r).

    Args:
        op: Operator whose underlying delta or sigma is applied.
        i: Power of the operator.
        k: Monomial index in units of 1/r.
        r: Ramification.
        point: Expansion point.

    Returns:
        ``(index, factor)``; the factor may vanish, in which case the image is zero.
    """
    case, field = op.case, op.field
    e = Fraction(k, r)
    at_infinity = point == SeriesPoint.INFINITY

    if op.kind == OperatorKind.DELTA:
        if case.kind == CaseKind.S:
            factor = Fraction(1)
            if at_infinity:
                # d/dx t^e = -e t^(e+1)
                for j in range(i):
                    factor *= -(e + j)
                return k + i * r, field.convert(factor)
            for j in range(i):
                factor *= e - j
            return k - i * r, field.convert(factor)
        base = -e if at_infinity else e
        return k, field.convert(base**i)

    index = op.sigma_index
    if case.is_mahler:
        return k * case.mahler_exponent(index) ** i, field.one
    if case.kind in (CaseKind.Q, CaseKind.TWO_Q):
        if e.denominator != 1:
            raise OperatorError("q-dilation of fractional exponents needs a declared multiplier")
        q = case.dilation(index)
        exponent = int(e) * i
        return k, field.power(q, -exponent if at_infinity else exponent)
    if not at_infinity:
        raise OperatorError("shift operators act on series only at infinity")
    return k, field.one


def _apply_power(op: ScalarOperator, s: PuiseuxSeriesTrunc, i: int) -> PuiseuxSeriesTrunc:
    for _ in range(i):
        if op.kind == OperatorKind.DELTA:
            s = delta_series(s, op.case)
        else:
            s = sigma_series(s, op.case, op.sigma_index)
    return s


class _Recurrence:
    """Leading-term bookkeeping of one operator at one point and ramification."""

    def __init__(self, op: ScalarOperator, r: int, point: SeriesPoint):
        self.op = op
        self.r = r
        self.point = point
        self.active: list[tuple[int, int, Any]] = []
        for i, c in enumerate(op.coeffs):
            if c:
                w, lc = _leading_at_point(c, point)
                self.active.append((i, w * r, lc))

    def level(self, k: int) -> int:
        """l(k): the index at which x**(k/r) first shows in the residual."""
        return min(w + _monomial_image(self.op, i, k, self.r, self.point)[0] for i, w, _ in self.active)

    def chi(self, k: int) -> Any:
        target = self.level(k)
        total = self.op.field.zero
        for i, w, lc in self.active:
            index, factor = _monomial_image(self.op, i, k, self.r, self.point)
            if w + index == target:
                total += lc * factor
        return total

    def min_valuation(self) -> int:
        return min(w for _, w, _ in self.active)


class _ShiftRecurrence(_Recurrence):
    """Recurrence of a shift operator at infinity.

    sigma**i(t**e) = t**e * (1 + i*h*t)**(-e), so every power of sigma has leading factor 1 and
    the leading terms of a nonzero solution's operator cancel for every e. The coefficient of
    t**(e + w + s) in op(t**e) is a polynomial P_s(e); the recurrence lives at the first s whose
    P_s is not identically zero, with chi(k) = P_s(k/r).
    """

    def __init__(self, op: ScalarOperator, r: int, point: SeriesPoint):
        if point != SeriesPoint.INFINITY:
            raise OperatorError("shift operators act on series only at infinity")
        super().__init__(op, r, point)
        field = op.field
        self.ring, self.e = ring("e", field.domain)
        self.h = op.case.shift_amount(op.sigma_index)
        self.w = min(w for _, w, _ in self.active) // r
        self._expansions: dict[int, PuiseuxSeriesTrunc] = {}
        self.s0, self.indicial = self._first_nonvanishing_level()
        logger.debug(f"Shift recurrence sits {self.s0} steps past the leading level: {self.indicial}")

    def _coefficient(self, i: int, m: int) -> Any:
        """Coefficient of t**(w_i + m) in the expansion of c_i at infinity."""
        c = self.op.coeffs[i]
        base = c.valuation_at_infinity()
        series = self._expansions.get(i)
        if series is None or series.order < base + m:
            series = expand_series(c, SeriesPoint.INFINITY, base + max(2 * m, 8))
            self._expansions[i] = series
        return series.coefficient(base + m)

    def _level_polynomial(self, s: int) -> Any:
        field = self.op.field
        total = self.ring.zero
        for i, w, _ in self.active:
            offset = w // self.r - self.w
            step = field.convert(i) * self.h
            binom = self.ring.one
            for j in range(s - offset + 1):
                if j:
                    binom = binom * (-self.e - (j - 1)) * field.rational(1, j)
                c = self._coefficient(i, s - offset - j)
                if c:
                    total += binom * (c * (step**j if j else field.one))
        return total

    def _first_nonvanishing_level(self) -> tuple[int, Any]:
        for s in range(get_settings().step_budget):
            poly = self._level_polynomial(s)
            if poly:
                return s, poly
        raise InternalConsistencyError("shift operator annihilates every monomial")

    def level(self, k: int) -> int:
        return k + (self.w + self.s0) * self.r

    def chi(self, k: int) -> Any:
        return self.indicial(self.op.field.convert(Fraction(k, self.r)))


def _recurrence(op: ScalarOperator, r: int, point: SeriesPoint) -> _Recurrence:
    """Pick the recurrence bookkeeping that fits the operator's case and kind."""
    if op.kind != OperatorKind.DELTA and op.case.kind in (CaseKind.S, CaseKind.TWO_S):
        return _ShiftRecurrence(op, r, point)
    return _Recurrence(op, r, point)


def _monomial_residual(
    op: ScalarOperator,
    expansions: dict[int, PuiseuxSeriesTrunc],
    k: int,
    order: int,
    r: int,
    point: SeriesPoint,
) -> PuiseuxSeriesTrunc:
    """sum_i c_i op**i(x**(k/r)) with the coefficients pre-expanded."""
    field = op.field
    monomial = PuiseuxSeriesTrunc.monomial(field, k, order, 1, r, point)
    total = PuiseuxSeriesTrunc.zero(field, order, r, point)
    image = monomial
    for i, c in enumerate(op.coeffs):
        if i:
            image = _apply_power(op, image, 1)
        if c:
            total = total + expansions[i] * image
    return total


def extend_series_by_operator(
    op: ScalarOperator,
    seed: PuiseuxSeriesTrunc,
    order: int,
) -> PuiseuxSeriesTrunc:
    """Extend a seed to the unique series with op(result) = 0 up to index order.

    Args:
        op: Scalar operator whose coefficient recurrence drives the extension.
        seed: Known leading coefficients; everything up to seed.order is taken as given.
        order: Target truncation index N (units of 1/ramification).

    Returns:
        Series agreeing with the seed and truncated at N.

    Raises:
        InconsistentSeedError: The residual has a nonzero coefficient the seed cannot absorb.
        ResonanceError: The recurrence coefficient chi(k) vanishes at an unknown index k.
    """
    r, point, field = seed.ramification, seed.point, seed.field
    rec = _recurrence(op, r, point)
    start = seed.order + 1
    target = max(order, seed.order)
    top = rec.level(target)
    working = top - rec.min_valuation() + op.order * r + 1
    logger.info(
        f"Extending series from index {seed.order} to {order} by an operator of order {op.order}"
    )

    padded = PuiseuxSeriesTrunc(field, seed.coeffs, seed.valuation, working, r, point)
    residual = apply_to_series(op, padded)
    if residual.order < top:
        raise InternalConsistencyError(
            f"residual known to {residual.order}, below the needed index {top}"
        )

    checked = rec.level(seed.order)
    for index in range(residual.valuation, checked + 1):
        if residual.coefficient(index):
            logger.error(f"Seed contradicts the operator at residual index {index}")
            raise InconsistentSeedError(index)

    lowest_image = min(
        _monomial_image(op, i, start, r, point)[0] for i, _, _ in rec.active
    )
    expansions: dict[int, PuiseuxSeriesTrunc] = {}
    for i, c in enumerate(op.coeffs):
        if c:
            expansions[i] = expand_series(c, point, top - min(lowest_image, 0) + 1, r)

    values: dict[int, Any] = {}
    for k in range(start, target + 1):
        level = rec.level(k)
        for index in range(checked + 1, level):
            if residual.coefficient(index):
                logger.error(f"Residual index {index} is not reachable by any unknown coefficient")
                raise InconsistentSeedError(index, "no free coefficient reaches this index")
        chi = rec.chi(k)
        value = residual.coefficient(level)
        if not chi:
            if value:
                raise InconsistentSeedError(level, f"recurrence vanishes at coefficient {k}")
            logger.error(f"Coefficient recurrence stalls at index {k}")
            raise ResonanceError(k)
        a_k = -value / chi
        checked = level
        if not a_k:
            continue
        values[k] = a_k
        residual = residual + _monomial_residual(op, expansions, k, working, r, point).scale(a_k)

    coeffs = [seed.coefficient(i) for i in range(seed.valuation, seed.order + 1)] if seed.coeffs else []
    base = seed.valuation if seed.coeffs else start
    coeffs += [values.get(k, field.zero) for k in range(max(start, base), target + 1)]
    result = PuiseuxSeriesTrunc(field, coeffs, base, target, r, point)
    return result.truncate(order)
