"""Univariate rational functions over the constants field.

A :class:`RatFunc` stores a numerator and a denominator as sympy ``PolyElement`` objects of
``field.poly_ring``. Every constructor path normalizes: the pair is coprime, the denominator is
monic, and zero is stored as ``0/1``. Values are immutable.
"""

from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from core.exceptions import ExactArithmeticError, ZeroDenominatorError

from .constants import ConstantsField


def _poly_valuation(poly: Any) -> int:
    """Lowest exponent present in a nonzero polynomial."""
    return min(monom[0] for monom in poly.keys())


def _poly_degree(poly: Any) -> int:
    """Degree with -1 for the zero polynomial."""
    return poly.degree() if poly else -1


def _poly_coefficient(poly: Any, k: int, zero: Any) -> Any:
    return poly.get((k,), zero)


def _poly_from_list(field: ConstantsField, coeffs: Iterable[Any]) -> Any:
    ring = field.poly_ring
    terms = {}
    for k, c in enumerate(coeffs):
        c = field.convert(c)
        if c:
            terms[(k,)] = c
    return ring.from_dict(terms) if terms else ring.zero


def _poly_to_list(poly: Any, zero: Any) -> list[Any]:
    if not poly:
        return []
    return [_poly_coefficient(poly, k, zero) for k in range(poly.degree() + 1)]


class RatFunc:
    """Normalized rational function num/den in the variable x."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: ConstantsField, num: Any, den: Any = None):
        ring = field.poly_ring
        if den is None:
            den = ring.one
        if not den:
            raise ZeroDenominatorError()
        if not num:
            num, den = ring.zero, ring.one
        else:
            num, den = num.cancel(den)
            lc = den.LC
            if lc != field.one:
                num = num.quo_ground(lc)
                den = den.quo_ground(lc)
        self.field = field
        self.num = num
        self.den = den

    # Construction

    @classmethod
    def zero(cls, field: ConstantsField) -> "RatFunc":
        return cls(field, field.poly_ring.zero)

    @classmethod
    def one(cls, field: ConstantsField) -> "RatFunc":
        return cls(field, field.poly_ring.one)

    @classmethod
    def constant(cls, field: ConstantsField, value: Any) -> "RatFunc":
        """Embed a constant (anything ``field.convert`` accepts)."""
        return cls(field, field.poly_ring.ground_new(field.convert(value)))

    @classmethod
    def x(cls, field: ConstantsField) -> "RatFunc":
        return cls(field, field.poly_ring.gens[0])

    @classmethod
    def monomial(cls, field: ConstantsField, exponent: int, coeff: Any = 1) -> "RatFunc":
        """Return coeff * x**exponent, negative exponents allowed."""
        ring = field.poly_ring
        c = field.convert(coeff)
        if exponent >= 0:
            return cls(field, ring.from_dict({(exponent,): c}) if c else ring.zero)
        return cls(field, ring.ground_new(c), ring.from_dict({(-exponent,): field.one}))

    @classmethod
    def from_coefficients(
        cls,
        field: ConstantsField,
        num: Sequence[Any],
        den: Sequence[Any] | None = None,
    ) -> "RatFunc":
        """Build from ascending coefficient lists.

        Args:
            field: Constants field of the coefficients.
            num: Numerator coefficients, constant term first.
            den: Denominator coefficients, constant term first (defaults to ``[1]``).

        Returns:
            Normalized rational function.
        """
        numerator = _poly_from_list(field, num)
        denominator = _poly_from_list(field, den if den is not None else [1])
        return cls(field, numerator, denominator)

    def _coerce(self, other: Any) -> "RatFunc | None":
        """Lift ints, Fractions and field elements; None for anything else."""
        if isinstance(other, RatFunc):
            if other.field != self.field:
                raise ExactArithmeticError("rational functions over different fields")
            return other
        if isinstance(other, bool):
            return None
        if isinstance(other, (int, Fraction)) or self.field.is_element(other):
            return RatFunc.constant(self.field, other)
        return None

    # Arithmetic

    def __add__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.field, self.num + other.num, self.den)
        return RatFunc(
            self.field, self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(self.field, -self.num, self.den)

    def __sub__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.field, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.field, self.den, self.num)

    def __truediv__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "RatFunc":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent >= 0:
            return RatFunc(self.field, self.num**exponent, self.den**exponent)
        return self.inverse() ** (-exponent)

    def __eq__(self, other: object) -> bool:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return self.num == coerced.num and self.den == coerced.den

    def __hash__(self) -> int:
        return hash((self.field, self.num, self.den))

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __bool__(self) -> bool:
        return bool(self.num)

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        num = str(self.num.as_expr())
        if self.den == self.field.poly_ring.one:
            return num
        return f"({num})/({self.den.as_expr()})"

    # Predicates and accessors

    @property
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.den.degree() == 0 and (not self.num or self.num.degree() == 0)

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def is_laurent_monomial(self) -> bool:
        """True for c * x**k with k possibly negative."""
        return len(self.num) == 1 and len(self.den) == 1

    def constant_value(self) -> Any:
        """Return the constant this function equals; raises when it is not constant."""
        if not self.is_constant():
            raise ExactArithmeticError(f"{self} is not constant")
        return _poly_coefficient(self.num, 0, self.field.zero)

    def numerator_coefficients(self) -> list[Any]:
        """Ascending numerator coefficients (empty for zero)."""
        return _poly_to_list(self.num, self.field.zero)

    def denominator_coefficients(self) -> list[Any]:
        return _poly_to_list(self.den, self.field.zero)

    def degree(self) -> int:
        """Degree as a rational function: max of numerator and denominator degrees."""
        return max(_poly_degree(self.num), self.den.degree(), 0)

    def valuation(self) -> int | None:
        """x-adic valuation at 0, or None for the zero function."""
        if not self.num:
            return None
        return _poly_valuation(self.num) - _poly_valuation(self.den)

    def valuation_at_infinity(self) -> int | None:
        """Valuation in t = 1/x, i.e. deg(den) - deg(num); None for zero."""
        if not self.num:
            return None
        return self.den.degree() - self.num.degree()

    def leading_coefficient_at_zero(self) -> Any:
        """Coefficient of x**valuation in the expansion at 0."""
        if not self.num:
            return self.field.zero
        zero = self.field.zero
        n0 = _poly_coefficient(self.num, _poly_valuation(self.num), zero)
        d0 = _poly_coefficient(self.den, _poly_valuation(self.den), zero)
        return n0 / d0

    def value_at_zero(self) -> Any:
        """Evaluate at x = 0; raises for a pole at 0."""
        v = self.valuation()
        if v is None or v > 0:
            return self.field.zero
        if v < 0:
            raise ExactArithmeticError(f"{self} has a pole at 0")
        return self.leading_coefficient_at_zero()

    def evaluate(self, point: Any) -> Any:
        """Evaluate at a constant point."""
        c = self.field.convert(point)
        den = _horner(self.den, c, self.field)
        if not den:
            raise ExactArithmeticError(f"{self} has a pole at {self.field.format(c)}")
        return _horner(self.num, c, self.field) / den

    # Calculus and substitution

    def diff(self) -> "RatFunc":
        """Derivative d/dx."""
        x = self.field.poly_ring.gens[0]
        num = self.num.diff(x) * self.den - self.num * self.den.diff(x)
        return RatFunc(self.field, num, self.den**2)

    def theta(self) -> "RatFunc":
        """Euler derivation x d/dx."""
        return RatFunc.x(self.field) * self.diff()

    def substitute_polynomial(self, poly: Any) -> "RatFunc":
        """Compose with a polynomial x -> poly(x) (a PolyElement of the same ring)."""
        x = self.field.poly_ring.gens[0]
        return RatFunc(self.field, self.num.compose(x, poly), self.den.compose(x, poly))

    def substitute(self, g: "RatFunc") -> "RatFunc":
        """Compose with a rational function x -> g(x).

        With g = a/b and P of degree d, P(a/b) = P_hom(a, b) / b**d, so the result is computed
        on homogenized polynomials without intermediate fractions.
        """
        g = self._coerce(g)
        if g.is_polynomial():
            return self.substitute_polynomial(g.num.quo_ground(g.den.LC))
        a, b = g.num, g.den
        dn, dd = max(_poly_degree(self.num), 0), self.den.degree()
        num = _homogenize(self.num, a, b, dn, self.field)
        den = _homogenize(self.den, a, b, dd, self.field)
        if dd >= dn:
            return RatFunc(self.field, num * b ** (dd - dn), den)
        return RatFunc(self.field, num, den * b ** (dn - dd))

    def substitute_power(self, p: int) -> "RatFunc":
        """Compose with x -> x**p (p >= 1)."""
        if p < 1:
            raise ExactArithmeticError(f"power substitution needs p >= 1, got {p}")
        ring = self.field.poly_ring
        return self.substitute_polynomial(ring.gens[0] ** p)

    def substitute_scale(self, c: Any) -> "RatFunc":
        """Compose with x -> c*x."""
        ring = self.field.poly_ring
        return self.substitute_polynomial(ring.gens[0].mul_ground(self.field.convert(c)))

    def substitute_shift(self, a: Any) -> "RatFunc":
        """Compose with x -> x + a."""
        ring = self.field.poly_ring
        return self.substitute_polynomial(ring.gens[0] + ring.ground_new(self.field.convert(a)))

    def map_coefficients(self, fn: Callable[[Any], Any], target: ConstantsField) -> "RatFunc":
        """Apply fn to every coefficient, landing in target's field."""
        num = _poly_from_list(target, [fn(c) for c in self.numerator_coefficients()])
        den = _poly_from_list(target, [fn(c) for c in self.denominator_coefficients()])
        return RatFunc(target, num, den)


def _horner(poly: Any, c: Any, field: ConstantsField) -> Any:
    result = field.zero
    for coeff in reversed(_poly_to_list(poly, field.zero)):
        result = result * c + coeff
    return result


def _homogenize(poly: Any, a: Any, b: Any, degree: int, field: ConstantsField) -> Any:
    """Return sum_k c_k a**k b**(degree - k) for poly = sum_k c_k x**k."""
    ring = field.poly_ring
    result = ring.zero
    for k, c in enumerate(_poly_to_list(poly, field.zero)):
        if c:
            result += (a**k * b ** (degree - k)).mul_ground(c)
    return result


def normalize_ratfunc(field: ConstantsField, num: Any, den: Any) -> RatFunc:
    """Build the canonical form of num/den.

    Args:
        field: Constants field.
        num: Numerator as a PolyElement or an ascending coefficient list.
        den: Denominator as a PolyElement or an ascending coefficient list.

    Returns:
        Coprime, monic-denominator rational function.
    """
    if isinstance(num, (list, tuple)):
        num = _poly_from_list(field, num)
    if isinstance(den, (list, tuple)):
        den = _poly_from_list(field, den)
    return RatFunc(field, num, den)


def poly_from_coefficients(field: ConstantsField, coeffs: Iterable[Any]) -> Any:
    """PolyElement from ascending coefficients."""
    return _poly_from_list(field, coeffs)


def poly_coefficients(field: ConstantsField, poly: Any) -> list[Any]:
    """Ascending coefficient list of a PolyElement (empty for zero)."""
    return _poly_to_list(poly, field.zero)
