"""Truncated Laurent and Puiseux series.

A series in ``x**(1/r)`` is stored by integer indices in units of ``1/r``: the coefficient list
covers indices ``valuation .. order``, and every exponent ``<= order/r`` is exact while the error
term is ``O(x**((order + 1)/r))``. Series at infinity use the variable ``t = 1/x``; the point is
carried so that operator actions can pick the right formulas.
"""

from fractions import Fraction
from math import gcd, lcm
from typing import Any, Callable, Iterable, Sequence

from sympy.polys.densearith import dup_mul
from sympy.polys.densebasic import dup_strip

from config.settings import get_settings
from core.exceptions import ExactArithmeticError, InputError, InsufficientOrderError
from core.types import SeriesPoint

from .constants import ConstantsField
from .ratfunc import RatFunc


def _truncated_product(f: Sequence[Any], g: Sequence[Any], length: int, field: ConstantsField) -> list[Any]:
    """First ``length`` coefficients of the product of two ascending coefficient lists."""
    f, g = list(f[:length]), list(g[:length])
    if not f or not g:
        return [field.zero] * length
    if min(len(f), len(g)) < get_settings().schoolbook_threshold:
        out = [field.zero] * length
        for i, a in enumerate(f):
            if not a:
                continue
            for j in range(min(len(g), length - i)):
                b = g[j]
                if b:
                    out[i + j] += a * b
        return out
    product = dup_mul(dup_strip(f[::-1]), dup_strip(g[::-1]), field.domain)
    out = product[::-1][:length]
    return out + [field.zero] * (length - len(out))


def _binomial_negated(e: int, k: int) -> Fraction:
    """Generalized binomial coefficient C(-e, k)."""
    value = Fraction(1)
    for i in range(k):
        value = value * (-e - i) / (i + 1)
    return value


class PuiseuxSeriesTrunc:
    """Truncated series sum_i c_i x**(i/r), i from valuation to order."""

    __slots__ = ("field", "ramification", "valuation", "order", "coeffs", "point")

    def __init__(
        self,
        field: ConstantsField,
        coeffs: Iterable[Any],
        valuation: int = 0,
        order: int | None = None,
        ramification: int = 1,
        point: SeriesPoint = SeriesPoint.ZERO,
    ):
        if ramification < 1:
            raise InputError(f"ramification must be positive, got {ramification}")
        values = [field.convert(c) for c in coeffs]
        if order is None:
            order = valuation + len(values) - 1
        keep = order - valuation + 1
        if keep <= 0:
            values = []
        else:
            values = values[:keep] + [field.zero] * (keep - len(values))

        lead = next((i for i, c in enumerate(values) if c), None)
        if lead is None:
            values, valuation = [], order + 1
        else:
            values, valuation = values[lead:], valuation + lead

        self.field = field
        self.ramification = ramification
        self.valuation = valuation
        self.order = order
        self.coeffs = tuple(values)
        self.point = SeriesPoint(point)

    # Construction

    @classmethod
    def zero(
        cls,
        field: ConstantsField,
        order: int,
        ramification: int = 1,
        point: SeriesPoint = SeriesPoint.ZERO,
    ) -> "PuiseuxSeriesTrunc":
        """The zero series known up to the given order."""
        return cls(field, [], order + 1, order, ramification, point)

    @classmethod
    def monomial(
        cls,
        field: ConstantsField,
        index: int,
        order: int,
        coeff: Any = 1,
        ramification: int = 1,
        point: SeriesPoint = SeriesPoint.ZERO,
    ) -> "PuiseuxSeriesTrunc":
        return cls(field, [coeff], index, order, ramification, point)

    @classmethod
    def from_terms(
        cls,
        field: ConstantsField,
        terms: dict[Fraction, Any],
        order: Fraction,
        point: SeriesPoint = SeriesPoint.ZERO,
    ) -> "PuiseuxSeriesTrunc":
        """Build from a mapping exponent -> coefficient, exact for exponents <= order.

        Args:
            field: Constants field.
            terms: Nonzero terms by rational exponent.
            order: Largest exact exponent.
            point: Expansion point.

        Returns:
            Series at the smallest ramification holding every exponent.
        """
        exponents = [Fraction(e) for e in terms] + [Fraction(order)]
        r = lcm(*(e.denominator for e in exponents))
        top = int(Fraction(order) * r)
        indexed = {int(Fraction(e) * r): c for e, c in terms.items()}
        low = min([*indexed, top + 1])
        values = [indexed.get(i, 0) for i in range(low, top + 1)]
        return cls(field, values, low, top, r, point)

    # Accessors

    def __repr__(self) -> str:
        return (
            f"PuiseuxSeriesTrunc(v={self.valuation}, N={self.order}, r={self.ramification}, "
            f"point={self.point.value}, coeffs=[{', '.join(self.field.format(c) for c in self.coeffs)}])"
        )

    def __str__(self) -> str:
        var = "x" if self.point == SeriesPoint.ZERO else "t"
        parts = [
            f"({self.field.format(c)})*{var}^({e})" for e, c in self.terms()
        ]
        precision = Fraction(self.order + 1, self.ramification)
        return " + ".join(parts + [f"O({var}^({precision}))"])

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.coeffs

    @property
    def precision(self) -> Fraction:
        """Largest exponent known exactly."""
        return Fraction(self.order, self.ramification)

    @property
    def valuation_exponent(self) -> Fraction:
        return Fraction(self.valuation, self.ramification)

    @property
    def leading_coefficient(self) -> Any:
        if not self.coeffs:
            raise InsufficientOrderError("series vanishes to its order", self.order)
        return self.coeffs[0]

    def coefficient(self, index: int) -> Any:
        """Coefficient of x**(index/r)."""
        if index > self.order:
            raise InsufficientOrderError(
                f"coefficient {index} beyond truncation order", self.order
            )
        if index < self.valuation:
            return self.field.zero
        return self.coeffs[index - self.valuation]

    def coefficient_at(self, exponent: Fraction) -> Any:
        scaled = Fraction(exponent) * self.ramification
        if scaled.denominator != 1:
            return self.field.zero
        return self.coefficient(int(scaled))

    def terms(self) -> list[tuple[Fraction, Any]]:
        """Nonzero terms as (exponent, coefficient), ascending."""
        return [
            (Fraction(self.valuation + i, self.ramification), c)
            for i, c in enumerate(self.coeffs)
            if c
        ]

    def dense(self, start: int, stop: int) -> list[Any]:
        """Coefficients for indices start..stop inclusive."""
        return [self.coefficient(i) for i in range(start, stop + 1)]

    # Ramification bookkeeping

    def _spread(self, factor: int, ramification: int) -> "PuiseuxSeriesTrunc":
        values = [self.field.zero] * (len(self.coeffs) * factor)
        for i, c in enumerate(self.coeffs):
            values[i * factor] = c
        order = (self.order + 1) * factor - 1
        return PuiseuxSeriesTrunc(
            self.field, values, self.valuation * factor, order, ramification, self.point
        )

    def with_ramification(self, ramification: int) -> "PuiseuxSeriesTrunc":
        """Re-express over x**(1/ramification), which must be a multiple of r."""
        if ramification % self.ramification:
            raise ExactArithmeticError(
                f"ramification {ramification} is not a multiple of {self.ramification}"
            )
        factor = ramification // self.ramification
        if factor == 1:
            return self
        return self._spread(factor, ramification)

    def compact(self) -> "PuiseuxSeriesTrunc":
        """Reduce the ramification when all exponents share a factor."""
        g = self.ramification
        for i, c in enumerate(self.coeffs):
            if c:
                g = gcd(g, self.valuation + i)
        if g == 1:
            return self
        values = [c for i, c in enumerate(self.coeffs) if (self.valuation + i) % g == 0]
        if not self.coeffs:
            order = self.order // g
            return PuiseuxSeriesTrunc.zero(self.field, order, self.ramification // g, self.point)
        return PuiseuxSeriesTrunc(
            self.field,
            values,
            self.valuation // g,
            self.order // g,
            self.ramification // g,
            self.point,
        )

    def _align(self, other: "PuiseuxSeriesTrunc") -> tuple["PuiseuxSeriesTrunc", "PuiseuxSeriesTrunc"]:
        if other.field != self.field:
            raise ExactArithmeticError("series over different constants fields")
        if other.point != self.point:
            raise ExactArithmeticError("series at different expansion points")
        r = lcm(self.ramification, other.ramification)
        return self.with_ramification(r), other.with_ramification(r)

    # Arithmetic

    def _scalar(self, other: Any) -> Any | None:
        if isinstance(other, bool):
            return None
        if isinstance(other, (int, Fraction)) or self.field.is_element(other):
            return self.field.convert(other)
        return None

    def __add__(self, other: Any) -> "PuiseuxSeriesTrunc":
        if not isinstance(other, PuiseuxSeriesTrunc):
            c = self._scalar(other)
            if c is None:
                return NotImplemented
            other = PuiseuxSeriesTrunc(self.field, [c], 0, self.order, self.ramification, self.point)
        a, b = self._align(other)
        order = min(a.order, b.order)
        low = min(a.valuation, b.valuation)
        values = [a.coefficient(i) + b.coefficient(i) for i in range(low, order + 1)]
        return PuiseuxSeriesTrunc(self.field, values, low, order, a.ramification, self.point)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeriesTrunc":
        return self.scale(-self.field.one)

    def __sub__(self, other: Any) -> "PuiseuxSeriesTrunc":
        if isinstance(other, PuiseuxSeriesTrunc):
            return self + (-other)
        c = self._scalar(other)
        if c is None:
            return NotImplemented
        return self + (-c)

    def __rsub__(self, other: Any) -> "PuiseuxSeriesTrunc":
        return (-self) + other

    def scale(self, c: Any) -> "PuiseuxSeriesTrunc":
        """Multiply by a constant."""
        c = self.field.convert(c)
        return PuiseuxSeriesTrunc(
            self.field,
            [c * a for a in self.coeffs],
            self.valuation,
            self.order,
            self.ramification,
            self.point,
        )

    def __mul__(self, other: Any) -> "PuiseuxSeriesTrunc":
        if not isinstance(other, PuiseuxSeriesTrunc):
            c = self._scalar(other)
            if c is None:
                return NotImplemented
            return self.scale(c)
        a, b = self._align(other)
        order = min(a.order + b.valuation, b.order + a.valuation)
        low = a.valuation + b.valuation
        length = order - low + 1
        if length <= 0 or not a.coeffs or not b.coeffs:
            return PuiseuxSeriesTrunc.zero(self.field, order, a.ramification, self.point)
        values = _truncated_product(a.coeffs, b.coeffs, length, self.field)
        return PuiseuxSeriesTrunc(self.field, values, low, order, a.ramification, self.point)

    __rmul__ = __mul__

    def inverse(self) -> "PuiseuxSeriesTrunc":
        """Multiplicative inverse; the result is exact to order N - 2v."""
        if not self.coeffs:
            raise InsufficientOrderError("cannot invert a series vanishing to its order", self.order)
        c = self.coeffs
        inv0 = self.field.one / c[0]
        values = [inv0]
        for k in range(1, len(c)):
            acc = self.field.zero
            for i in range(1, k + 1):
                if c[i]:
                    acc += c[i] * values[k - i]
            values.append(-acc * inv0)
        return PuiseuxSeriesTrunc(
            self.field,
            values,
            -self.valuation,
            self.order - 2 * self.valuation,
            self.ramification,
            self.point,
        )

    def __truediv__(self, other: Any) -> "PuiseuxSeriesTrunc":
        if isinstance(other, PuiseuxSeriesTrunc):
            return self * other.inverse()
        c = self._scalar(other)
        if c is None:
            return NotImplemented
        return self.scale(self.field.one / c)

    def __pow__(self, exponent: int) -> "PuiseuxSeriesTrunc":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = PuiseuxSeriesTrunc(
            self.field, [1], 0, self.order, self.ramification, self.point
        )
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PuiseuxSeriesTrunc):
            return NotImplemented
        a, b = self.compact(), other.compact()
        return (
            a.field == b.field
            and a.point == b.point
            and a.ramification == b.ramification
            and a.valuation == b.valuation
            and a.order == b.order
            and a.coeffs == b.coeffs
        )

    def __hash__(self) -> int:
        a = self.compact()
        return hash((a.field, a.point, a.ramification, a.valuation, a.order, a.coeffs))

    def agrees_with(self, other: "PuiseuxSeriesTrunc", order: Fraction | None = None) -> bool:
        """Compare coefficients up to the common precision (or a smaller exponent)."""
        a, b = self._align(other)
        top = min(a.order, b.order)
        if order is not None:
            top = min(top, int(Fraction(order) * a.ramification))
        low = min(a.valuation, b.valuation)
        return all(a.coefficient(i) == b.coefficient(i) for i in range(low, top + 1))

    # Truncation and shifts

    def truncate(self, order: int) -> "PuiseuxSeriesTrunc":
        """Forget coefficients beyond index order."""
        if order >= self.order:
            return self
        return PuiseuxSeriesTrunc(
            self.field, self.coeffs, self.valuation, order, self.ramification, self.point
        )

    def truncate_exponent(self, exponent: Fraction) -> "PuiseuxSeriesTrunc":
        return self.truncate(int(Fraction(exponent) * self.ramification // 1))

    def shift(self, index: int) -> "PuiseuxSeriesTrunc":
        """Multiply by x**(index/r)."""
        return PuiseuxSeriesTrunc(
            self.field,
            self.coeffs,
            self.valuation + index,
            self.order + index,
            self.ramification,
            self.point,
        )

    # Substitutions and derivations, all in the series variable

    def substitute_power(self, p: int) -> "PuiseuxSeriesTrunc":
        """Substitute var -> var**p; the order becomes p(N+1) - 1."""
        if p < 1:
            raise InputError(f"power substitution needs p >= 1, got {p}")
        if p == 1:
            return self
        return self._spread(p, self.ramification)

    def substitute_scale(self, c: Any) -> "PuiseuxSeriesTrunc":
        """Substitute var -> c*var; only defined on integer exponents."""
        c = self.field.convert(c)
        if not c:
            raise InputError("scale substitution needs a nonzero constant")
        compact = self.compact()
        if compact.ramification != 1:
            if c == self.field.one:
                return self
            raise ExactArithmeticError("x -> c*x on fractional exponents is not represented")
        values = [
            a * self.field.power(c, compact.valuation + i) if a else a
            for i, a in enumerate(compact.coeffs)
        ]
        return PuiseuxSeriesTrunc(
            self.field, values, compact.valuation, compact.order, 1, self.point
        )

    def theta(self) -> "PuiseuxSeriesTrunc":
        """Euler derivation var * d/dvar."""
        r = self.ramification
        values = [
            a * self.field.rational(self.valuation + i, r) for i, a in enumerate(self.coeffs)
        ]
        return PuiseuxSeriesTrunc(
            self.field, values, self.valuation, self.order, r, self.point
        )

    def derivative(self) -> "PuiseuxSeriesTrunc":
        """d/dvar; exponents drop by one."""
        r = self.ramification
        return self.theta().shift(-r)

    def shift_at_infinity(self, a: Any) -> "PuiseuxSeriesTrunc":
        """Substitute x -> x + a in a series in t = 1/x (integer exponents only).

        Each t**e becomes t**e * (1 + a t)**(-e), expanded binomially to the same order.
        """
        if self.point != SeriesPoint.INFINITY:
            raise ExactArithmeticError("argument shifts are only represented at infinity")
        a = self.field.convert(a)
        s = self.compact()
        if s.ramification != 1:
            raise ExactArithmeticError("argument shift on fractional exponents is not represented")
        if not a:
            return s
        low, order = s.valuation, s.order
        values = [self.field.zero] * (order - low + 1)
        for i, c in enumerate(s.coeffs):
            if not c:
                continue
            e = low + i
            for k in range(order - e + 1):
                binom = _binomial_negated(e, k)
                if binom:
                    term = self.field.rational(binom.numerator, binom.denominator)
                    values[i + k] += c * term * self.field.power(a, k)
        return PuiseuxSeriesTrunc(self.field, values, low, order, 1, self.point)

    def map_coefficients(self, fn: Callable[[Any], Any]) -> "PuiseuxSeriesTrunc":
        return PuiseuxSeriesTrunc(
            self.field,
            [fn(c) for c in self.coeffs],
            self.valuation,
            self.order,
            self.ramification,
            self.point,
        )

    def to_ratfunc(self) -> RatFunc:
        """The known part as a Laurent polynomial in x (integer exponents only)."""
        s = self.compact()
        if s.ramification != 1:
            raise ExactArithmeticError("series has fractional exponents")
        result = RatFunc.zero(self.field)
        sign = 1 if self.point == SeriesPoint.ZERO else -1
        for i, c in enumerate(s.coeffs):
            if c:
                result += RatFunc.monomial(self.field, sign * (s.valuation + i), c)
        return result


def expand_series(
    f: RatFunc,
    at: SeriesPoint = SeriesPoint.ZERO,
    order: int | None = None,
    ramification: int = 1,
) -> PuiseuxSeriesTrunc:
    """Expand a rational function at 0 (in x) or at infinity (in t = 1/x).

    Args:
        f: Rational function to expand.
        at: Expansion point.
        order: Truncation order in units of 1/ramification (defaults to the configured order).
        ramification: Ramification of the returned series.

    Returns:
        Series agreeing with f up to the requested order.
    """
    field = f.field
    at = SeriesPoint(at)
    if order is None:
        order = get_settings().default_order
    top = order // ramification
    if f.is_zero:
        return PuiseuxSeriesTrunc.zero(field, top, 1, at).with_ramification(ramification).truncate(order)

    num = f.numerator_coefficients()
    den = f.denominator_coefficients()
    if at == SeriesPoint.INFINITY:
        num, den = num[::-1], den[::-1]
    vn = next(i for i, c in enumerate(num) if c)
    vd = next(i for i, c in enumerate(den) if c)
    num, den = num[vn:], den[vd:]
    if at == SeriesPoint.INFINITY:
        # f(1/t) = t^(deg den - deg num) * rev(num)/rev(den)
        valuation = f.valuation_at_infinity()
    else:
        valuation = vn - vd

    count = top - valuation + 1
    values: list[Any] = []
    inv0 = field.one / den[0]
    for k in range(max(count, 0)):
        acc = num[k] if k < len(num) else field.zero
        for i in range(1, min(k, len(den) - 1) + 1):
            if den[i]:
                acc -= den[i] * values[k - i]
        values.append(acc * inv0)
    series = PuiseuxSeriesTrunc(field, values, valuation, top, 1, at)
    return series.with_ramification(ramification).truncate(order)


def substitute_series(
    s: PuiseuxSeriesTrunc,
    *,
    power: int | None = None,
    scale: Any = None,
) -> PuiseuxSeriesTrunc:
    """Apply x -> x**power or x -> scale*x to a series.

    Args:
        s: Series to substitute into.
        power: Positive integer exponent p.
        scale: Nonzero constant c.

    Returns:
        Substituted series; for powers the order scales as p(N+1) - 1.
    """
    if (power is None) == (scale is None):
        raise InputError("give exactly one of power and scale")
    if power is not None:
        return s.substitute_power(power)
    return s.substitute_scale(scale)


class SeriesMatrix:
    """Rectangular matrix with PuiseuxSeriesTrunc entries over a common field and point."""

    __slots__ = ("field", "rows")

    def __init__(self, field: ConstantsField, rows: Sequence[Sequence[PuiseuxSeriesTrunc]]):
        self.field = field
        self.rows = tuple(tuple(row) for row in rows)
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise InputError("ragged series matrix")

    @classmethod
    def identity(
        cls, field: ConstantsField, n: int, order: int, ramification: int = 1
    ) -> "SeriesMatrix":
        rows = [
            [
                PuiseuxSeriesTrunc(field, [1] if i == j else [], 0, order, ramification)
                for j in range(n)
            ]
            for i in range(n)
        ]
        return cls(field, rows)

    @classmethod
    def from_ratmatrix(
        cls,
        matrix: Any,
        order: int,
        ramification: int = 1,
        at: SeriesPoint = SeriesPoint.ZERO,
    ) -> "SeriesMatrix":
        """Expand every entry of a RatMatrix or ConstMatrix."""
        field = matrix.field
        rows = []
        for row in matrix.rows:
            out = []
            for entry in row:
                if not isinstance(entry, RatFunc):
                    entry = RatFunc.constant(field, entry)
                out.append(expand_series(entry, at, order, ramification))
            rows.append(out)
        return cls(field, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, key: tuple[int, int]) -> PuiseuxSeriesTrunc:
        i, j = key
        return self.rows[i][j]

    @property
    def order(self) -> int:
        """Smallest truncation order over all entries."""
        return min(entry.order for row in self.rows for entry in row)

    @property
    def ramification(self) -> int:
        return lcm(*(entry.ramification for row in self.rows for entry in row))

    def valuation(self) -> int | None:
        """Smallest valuation of a nonzero entry (in units of the common ramification)."""
        r = self.ramification
        vals = [
            entry.with_ramification(r).valuation
            for row in self.rows
            for entry in row
            if not entry.is_zero()
        ]
        return min(vals) if vals else None

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.rows for entry in row)

    def map(self, fn: Callable[[PuiseuxSeriesTrunc], PuiseuxSeriesTrunc]) -> "SeriesMatrix":
        return SeriesMatrix(self.field, [[fn(e) for e in row] for row in self.rows])

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.shape != other.shape:
            raise ExactArithmeticError("shape mismatch in series matrix sum")
        return SeriesMatrix(
            self.field,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return self + other.map(lambda e: -e)

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ExactArithmeticError("shape mismatch in series matrix product")
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.rows[i][0] * other.rows[0][j]
                for l in range(1, k):
                    acc = acc + self.rows[i][l] * other.rows[l][j]
                row.append(acc)
            rows.append(row)
        return SeriesMatrix(self.field, rows)

    def substitute_power(self, p: int) -> "SeriesMatrix":
        return self.map(lambda e: e.substitute_power(p))

    def truncate(self, order: int) -> "SeriesMatrix":
        return self.map(lambda e: e.truncate(order))

    def coefficient_matrix(self, index: int) -> list[list[Any]]:
        """Constant matrix of the coefficients of x**(index/r) (common ramification)."""
        r = self.ramification
        return [[e.with_ramification(r).coefficient(index) for e in row] for row in self.rows]
