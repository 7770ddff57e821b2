"""The represented constants field Q(tau_1, ..., tau_k).

Symbolic generators (q, alpha, ...) are declared up front in a constants header. With no
generators the field is sympy's ``QQ``; otherwise it is ``QQ.frac_field(*generators)``, whose
elements are canonical reduced fractions with decidable equality.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable

from sympy import Float, Rational, Symbol, nan, oo, sympify, zoo
from sympy.polys.domains import QQ
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyRing

from core.exceptions import InputError

# names reserved for the polynomial variable and its ramified versions
RESERVED_NAMES = frozenset({"x", "t", "xi"})


class ConstantsField:
    """Exact constants field with declared transcendental generators."""

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        for name in names:
            if not name.isidentifier() or name in RESERVED_NAMES:
                raise InputError(f"invalid generator name {name!r}", field="constants")
        if len(set(names)) != len(names):
            raise InputError("duplicate generator names", field="constants")

        self.names = names
        self.symbols = tuple(Symbol(name) for name in names)
        self.domain = QQ.frac_field(*self.symbols) if names else QQ
        self.poly_ring = PolyRing("x", self.domain)
        self._locals = {name: symbol for name, symbol in zip(names, self.symbols)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConstantsField) and other.names == self.names

    def __hash__(self) -> int:
        return hash(("ConstantsField", self.names))

    def __repr__(self) -> str:
        return f"ConstantsField({list(self.names)!r})"

    @property
    def zero(self) -> Any:
        return self.domain.zero

    @property
    def one(self) -> Any:
        return self.domain.one

    def is_element(self, value: Any) -> bool:
        """Check whether value is already an element of this field's domain."""
        return self.domain.of_type(value)

    def gen(self, name: str) -> Any:
        """Return the generator with the given name as a field element."""
        if name not in self._locals:
            raise InputError(f"undeclared generator {name!r}", field="constants")
        return self.domain.from_sympy(self._locals[name])

    def rational(self, numerator: int, denominator: int = 1) -> Any:
        """Return numerator/denominator as a field element."""
        if denominator == 0:
            raise InputError("zero denominator in rational constant")
        return self.domain.from_sympy(Rational(numerator, denominator))

    def convert(self, value: Any) -> Any:
        """Convert ints, Fractions, strings, sympy numbers or elements into the field.

        Args:
            value: Value to convert.

        Returns:
            Field element.
        """
        if self.is_element(value) and not isinstance(value, (bool, int)):
            return value
        if isinstance(value, bool):
            raise InputError("booleans are not constants")
        if isinstance(value, int):
            return self.rational(value)
        if isinstance(value, Fraction):
            return self.rational(value.numerator, value.denominator)
        if isinstance(value, str):
            return self.parse(value)
        try:
            return self.domain.convert(value)
        except (CoercionFailed, ValueError, TypeError) as e:
            raise InputError(f"cannot convert {value!r} to a constant: {e}")

    def parse(self, text: str) -> Any:
        """Parse a "p/q" string or an expression in the declared generators.

        Args:
            text: Textual constant such as "3/4" or "q**2 - 1".

        Returns:
            Field element.
        """
        try:
            expr = sympify(text, locals=dict(self._locals), rational=True)
        except Exception as e:
            raise InputError(f"malformed constant {text!r}: {e}")
        if expr.has(zoo, nan, oo, -oo):
            raise InputError(f"constant {text!r} is not finite")
        if expr.has(Float):
            raise InputError(f"floating-point constant {text!r} rejected")
        try:
            return self.domain.from_sympy(expr)
        except (CoercionFailed, ValueError, TypeError) as e:
            raise InputError(f"constant {text!r} is not in the declared field: {e}")

    def format(self, value: Any) -> str:
        """Format a field element canonically (parseable by :meth:`parse`)."""
        return str(self.domain.to_sympy(value))

    def to_sympy(self, value: Any) -> Any:
        return self.domain.to_sympy(value)

    def as_rational(self, value: Any) -> Fraction | None:
        """Return value as a Fraction when it is a rational number, else None."""
        expr = self.domain.to_sympy(value)
        if expr.is_Rational:
            return Fraction(int(expr.p), int(expr.q))
        return None

    def as_integer(self, value: Any) -> int | None:
        """Return value as an int when it is a rational integer, else None."""
        rational = self.as_rational(value)
        if rational is not None and rational.denominator == 1:
            return rational.numerator
        return None

    def power(self, value: Any, exponent: int) -> Any:
        """Integer power, negative exponents allowed for nonzero values."""
        if exponent >= 0:
            return value**exponent
        if not value:
            raise ZeroDivisionError("negative power of zero")
        return self.one / value ** (-exponent)

    def sort_key(self, value: Any) -> tuple:
        """Deterministic ordering key: rationals by value first, then by text."""
        rational = self.as_rational(value)
        if rational is not None:
            return (0, rational, "")
        return (1, Fraction(0), self.format(value))

    def extend(self, names: Iterable[str]) -> "ConstantsField":
        """Return the field with the extra generator names appended."""
        extra = [name for name in names if name not in self.names]
        return constants_field(self.names + tuple(extra))

    def embed(self, value: Any, source: "ConstantsField") -> Any:
        """Map an element of a subfield into this field."""
        return self.domain.from_sympy(source.to_sympy(value))


@lru_cache(maxsize=None)
def constants_field(names: tuple[str, ...] = ()) -> ConstantsField:
    """Get the shared field instance for a tuple of generator names.

    Args:
        names: Declared generator names, in header order.

    Returns:
        Cached ConstantsField.
    """
    return ConstantsField(names)


def rationals() -> ConstantsField:
    """Shortcut for the field Q with no generators."""
    return constants_field(())
