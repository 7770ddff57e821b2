"""Exact matrices over RatFunc and over the constants field.

Both matrix kinds share one Gaussian-elimination core (rank, determinant, inverse, nullspace).
Constant matrices add the spectral helpers: characteristic polynomial through sympy's
``DomainMatrix``, eigenvalues from a factorization over the constants field, and generalized
eigenspaces.
"""

from typing import Any, Callable, Generic, Iterable, Sequence, TypeVar

from sympy.polys.matrices import DomainMatrix

from config.logging_config import get_logger
from core.exceptions import ExactArithmeticError, NotInvertibleError, SpectrumNotSplitError

from .constants import ConstantsField
from .ratfunc import RatFunc, poly_from_coefficients

logger = get_logger(__name__)

E = TypeVar("E")
M = TypeVar("M", bound="_MatrixBase")


class _MatrixBase(Generic[E]):
    """Immutable rectangular matrix with Gaussian elimination over a field of entries."""

    __slots__ = ("field", "rows")

    def __init__(self, field: ConstantsField, rows: Sequence[Sequence[Any]]):
        self.field = field
        self.rows: tuple[tuple[E, ...], ...] = tuple(
            tuple(self._coerce_entry(e) for e in row) for row in rows
        )
        if len({len(row) for row in self.rows}) > 1:
            raise ExactArithmeticError("ragged matrix")

    # Entry hooks

    def _coerce_entry(self, value: Any) -> E:
        raise NotImplementedError

    def _zero(self) -> E:
        raise NotImplementedError

    def _one(self) -> E:
        raise NotImplementedError

    def _pivot_cost(self, value: E) -> int:
        return 0

    def _new(self: M, rows: Sequence[Sequence[Any]]) -> M:
        return type(self)(self.field, rows)

    # Construction

    @classmethod
    def identity(cls: type[M], field: ConstantsField, n: int) -> M:
        one, zero = 1, 0
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls: type[M], field: ConstantsField, n: int, m: int | None = None) -> M:
        return cls(field, [[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def diagonal(cls: type[M], field: ConstantsField, entries: Sequence[Any]) -> M:
        n = len(entries)
        return cls(field, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block_diagonal(cls: type[M], blocks: Sequence[M]) -> M:
        field = blocks[0].field
        n = sum(b.shape[0] for b in blocks)
        m = sum(b.shape[1] for b in blocks)
        rows = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                for j, e in enumerate(row):
                    rows[r0 + i][c0 + j] = e
            r0 += b.shape[0]
            c0 += b.shape[1]
        return cls(field, rows)

    @classmethod
    def from_blocks(cls: type[M], grid: Sequence[Sequence[M]]) -> M:
        """Assemble from a grid of blocks with compatible shapes."""
        field = grid[0][0].field
        rows: list[list[Any]] = []
        for block_row in grid:
            height = block_row[0].shape[0]
            for i in range(height):
                row: list[Any] = []
                for block in block_row:
                    row.extend(block.rows[i])
                rows.append(row)
        return cls(field, rows)

    # Shape and access

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def n(self) -> int:
        return len(self.rows)

    def is_square(self) -> bool:
        n, m = self.shape
        return n == m

    def __getitem__(self, key: tuple[int, int]) -> E:
        i, j = key
        return self.rows[i][j]

    def row(self, i: int) -> list[E]:
        return list(self.rows[i])

    def column(self, j: int) -> list[E]:
        return [row[j] for row in self.rows]

    def entries(self) -> Iterable[E]:
        for row in self.rows:
            yield from row

    def submatrix(self: M, rows: Sequence[int], cols: Sequence[int]) -> M:
        return self._new([[self.rows[i][j] for j in cols] for i in rows])

    def block(self: M, r0: int, r1: int, c0: int, c1: int) -> M:
        """Rows r0..r1-1 and columns c0..c1-1."""
        return self.submatrix(range(r0, r1), range(c0, c1))

    def transpose(self: M) -> M:
        n, m = self.shape
        return self._new([[self.rows[i][j] for i in range(n)] for j in range(m)])

    def map(self: M, fn: Callable[[E], Any]) -> M:
        return self._new([[fn(e) for e in row] for row in self.rows])

    def permute(self: M, perm: Sequence[int]) -> M:
        """Similarity P M P^-1 where P sends basis vector perm[i] to position i."""
        return self._new([[self.rows[perm[i]][perm[j]] for j in range(len(perm))] for i in range(len(perm))])

    def with_entry(self: M, i: int, j: int, value: Any) -> M:
        rows = [list(row) for row in self.rows]
        rows[i][j] = value
        return self._new(rows)

    # Predicates

    def is_zero(self) -> bool:
        return all(not e for e in self.entries())

    def is_identity(self) -> bool:
        n, m = self.shape
        one = self._one()
        return n == m and all(
            (self.rows[i][j] == one) if i == j else not self.rows[i][j]
            for i in range(n)
            for j in range(m)
        )

    def is_diagonal(self) -> bool:
        return all(not e for i, row in enumerate(self.rows) for j, e in enumerate(row) if i != j)

    def is_lower_triangular(self) -> bool:
        return all(not e for i, row in enumerate(self.rows) for j, e in enumerate(row) if j > i)

    def is_upper_triangular(self) -> bool:
        return all(not e for i, row in enumerate(self.rows) for j, e in enumerate(row) if j < i)

    # Arithmetic

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, _MatrixBase):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for a, b in zip(self.entries(), other.entries())
        )

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self: M, other: M) -> M:
        if self.shape != other.shape:
            raise ExactArithmeticError("shape mismatch in matrix sum")
        return self._new([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self: M) -> M:
        return self.map(lambda e: -e)

    def __sub__(self: M, other: M) -> M:
        return self + (-other)

    def __mul__(self: M, other: Any) -> M:
        if isinstance(other, _MatrixBase):
            n, k = self.shape
            k2, m = other.shape
            if k != k2:
                raise ExactArithmeticError(f"shape mismatch in product: {self.shape} x {other.shape}")
            zero = self._zero()
            rows = []
            for i in range(n):
                row = []
                for j in range(m):
                    acc = zero
                    for l in range(k):
                        a = self.rows[i][l]
                        if a:
                            b = other.rows[l][j]
                            if b:
                                acc = acc + a * b
                    row.append(acc)
                rows.append(row)
            return self._new(rows)
        c = self._coerce_entry(other)
        return self.map(lambda e: e * c)

    def __rmul__(self: M, other: Any) -> M:
        c = self._coerce_entry(other)
        return self.map(lambda e: c * e)

    def __pow__(self: M, exponent: int) -> M:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.identity(self.field, self.n)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def apply(self, vector: Sequence[Any]) -> list[E]:
        """Matrix-vector product."""
        zero = self._zero()
        out = []
        for row in self.rows:
            acc = zero
            for a, v in zip(row, vector):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    # Gaussian elimination

    def _eliminate(self, augment: Sequence[Sequence[E]] | None = None) -> tuple[list[list[E]], list[int], Any]:
        """Reduce to reduced row echelon form.

        Returns:
            (rows, pivot columns, determinant factor) where the determinant factor is the signed
            product of pivots (meaningful for square input without augmentation).
        """
        n, m = self.shape
        rows = [list(row) + (list(augment[i]) if augment else []) for i, row in enumerate(self.rows)]
        pivots: list[int] = []
        det = self._one()
        r = 0
        for c in range(m):
            candidates = [i for i in range(r, n) if rows[i][c]]
            if not candidates:
                continue
            p = min(candidates, key=lambda i: self._pivot_cost(rows[i][c]))
            if p != r:
                rows[p], rows[r] = rows[r], rows[p]
                det = -det
            pivot = rows[r][c]
            det = det * pivot
            inv = self._one() / pivot
            rows[r] = [e * inv if e else e for e in rows[r]]
            for i in range(n):
                if i != r and rows[i][c]:
                    factor = rows[i][c]
                    rows[i] = [a - factor * b if b else a for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == n:
                break
        return rows, pivots, det

    def rref(self: M) -> tuple[M, list[int]]:
        rows, pivots, _ = self._eliminate()
        return self._new(rows), pivots

    def rank(self) -> int:
        return len(self._eliminate()[1])

    def det(self) -> E:
        if not self.is_square():
            raise ExactArithmeticError("determinant of a non-square matrix")
        if self.n == 0:
            return self._one()
        _, pivots, det = self._eliminate()
        if len(pivots) < self.n:
            return self._zero()
        return det

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.n

    def inverse(self: M) -> M:
        """Exact inverse; raises NotInvertibleError carrying the determinant."""
        if not self.is_square():
            raise NotInvertibleError("non-square matrix", det=None)
        n = self.n
        identity = self.identity(self.field, n).rows
        rows, pivots, _ = self._eliminate(identity)
        if len(pivots) < n or any(p >= n for p in pivots):
            raise NotInvertibleError(f"determinant vanishes for {n}x{n} matrix", det=self._zero())
        return self._new([row[n:] for row in rows])

    def nullspace(self) -> list[list[E]]:
        """Basis of the right kernel, one vector per free column, normalized at that column."""
        n, m = self.shape
        rows, pivots, _ = self._eliminate()
        zero, one = self._zero(), self._one()
        basis = []
        for free in (c for c in range(m) if c not in pivots):
            vec = [zero] * m
            vec[free] = one
            for r, c in enumerate(pivots):
                vec[c] = -rows[r][free]
            basis.append(vec)
        return basis

    def solve(self, rhs: Sequence[Any]) -> list[E] | None:
        """One solution of M v = rhs, or None when inconsistent."""
        n, m = self.shape
        rows, pivots, _ = self._eliminate([[self._coerce_entry(b)] for b in rhs])
        for i in range(len(pivots), n):
            if rows[i][m]:
                return None
        vec = [self._zero()] * m
        for r, c in enumerate(pivots):
            vec[c] = rows[r][m]
        return vec

    def column_space_basis(self) -> list[int]:
        """Indices of a lexicographically first maximal independent set of columns."""
        return self._eliminate()[1]


class ConstMatrix(_MatrixBase[Any]):
    """Matrix over the constants field."""

    def _coerce_entry(self, value: Any) -> Any:
        if isinstance(value, RatFunc):
            return value.constant_value()
        return self.field.convert(value)

    def _zero(self) -> Any:
        return self.field.zero

    def _one(self) -> Any:
        return self.field.one

    def __repr__(self) -> str:
        body = "; ".join(", ".join(self.field.format(e) for e in row) for row in self.rows)
        return f"ConstMatrix([{body}])"

    def trace(self) -> Any:
        acc = self.field.zero
        for i in range(self.n):
            acc += self.rows[i][i]
        return acc

    def to_ratmatrix(self) -> "RatMatrix":
        return RatMatrix(self.field, [[RatFunc.constant(self.field, e) for e in row] for row in self.rows])

    def commutes_with(self, other: "ConstMatrix") -> bool:
        return self * other == other * self

    def charpoly(self) -> list[Any]:
        """Characteristic polynomial det(t I - M), highest coefficient first."""
        if not self.is_square():
            raise ExactArithmeticError("characteristic polynomial of a non-square matrix")
        if self.n == 0:
            return [self.field.one]
        dm = DomainMatrix([list(row) for row in self.rows], self.shape, self.field.domain)
        return list(dm.charpoly())

    def charpoly_poly(self) -> Any:
        """Characteristic polynomial as a PolyElement of the field's x-ring."""
        cp = self.charpoly()
        return poly_from_coefficients(self.field, cp[::-1])

    def eigenvalues(self) -> list[tuple[Any, int]]:
        """Eigenvalues with algebraic multiplicities, in a deterministic order.

        Raises:
            SpectrumNotSplitError: The characteristic polynomial has an irreducible factor of
                degree > 1 over the constants field.
        """
        poly = self.charpoly_poly()
        _, factors = poly.factor_list()
        result = []
        for factor, multiplicity in factors:
            if factor.degree() != 1:
                logger.error(f"Spectrum does not split: factor {factor.as_expr()}")
                raise SpectrumNotSplitError(
                    f"irreducible factor {factor.as_expr()} of degree {factor.degree()}",
                    charpoly=poly.as_expr(),
                )
            c0, c1 = (factor.get((k,), self.field.zero) for k in (0, 1))
            result.append((-c0 / c1, multiplicity))
        merged: dict[Any, int] = {}
        for value, multiplicity in result:
            merged[value] = merged.get(value, 0) + multiplicity
        return sorted(merged.items(), key=lambda item: self.field.sort_key(item[0]))

    def generalized_eigenspace(self, value: Any, multiplicity: int) -> list[list[Any]]:
        """Basis of ker (M - value I)**multiplicity."""
        shifted = self - ConstMatrix.identity(self.field, self.n) * value
        return (shifted**multiplicity).nullspace()

    def generalized_eigenspaces(self) -> list[tuple[Any, list[list[Any]]]]:
        """(eigenvalue, basis) pairs covering the whole space."""
        return [
            (value, self.generalized_eigenspace(value, multiplicity))
            for value, multiplicity in self.eigenvalues()
        ]

    def is_nilpotent(self) -> bool:
        return (self**self.n).is_zero() if self.n else True


class RatMatrix(_MatrixBase[RatFunc]):
    """Matrix over the rational functions RatFunc."""

    def _coerce_entry(self, value: Any) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        return RatFunc.constant(self.field, value)

    def _zero(self) -> RatFunc:
        return RatFunc.zero(self.field)

    def _one(self) -> RatFunc:
        return RatFunc.one(self.field)

    def _pivot_cost(self, value: RatFunc) -> int:
        return value.num.degree() + value.den.degree()

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"RatMatrix([{body}])"

    @classmethod
    def from_coefficient_rows(
        cls, field: ConstantsField, rows: Sequence[Sequence[Any]]
    ) -> "RatMatrix":
        return cls(field, rows)

    def is_constant(self) -> bool:
        return all(e.is_constant() for e in self.entries())

    def is_polynomial(self) -> bool:
        return all(e.is_polynomial() for e in self.entries())

    def constant_part(self) -> ConstMatrix:
        """The matrix as constants; raises when an entry depends on x."""
        return ConstMatrix(self.field, [[e.constant_value() for e in row] for row in self.rows])

    def value_at_zero(self) -> ConstMatrix:
        return ConstMatrix(self.field, [[e.value_at_zero() for e in row] for row in self.rows])

    def valuation(self) -> int | None:
        """Smallest x-adic valuation among nonzero entries."""
        vals = [e.valuation() for e in self.entries() if e]
        return min(vals) if vals else None

    def diff(self) -> "RatMatrix":
        return self.map(lambda e: e.diff())

    def theta(self) -> "RatMatrix":
        return self.map(lambda e: e.theta())

    def substitute(self, g: RatFunc) -> "RatMatrix":
        return self.map(lambda e: e.substitute(g))

    def substitute_power(self, p: int) -> "RatMatrix":
        return self.map(lambda e: e.substitute_power(p))

    def denominators(self) -> list[Any]:
        """Denominator polynomials of all entries."""
        return [e.den for e in self.entries()]


def as_ratmatrix(matrix: ConstMatrix | RatMatrix) -> RatMatrix:
    if isinstance(matrix, RatMatrix):
        return matrix
    return matrix.to_ratmatrix()


def invert_matrix(matrix: RatMatrix) -> RatMatrix:
    """Exact inverse of a square RatMatrix.

    Args:
        matrix: Matrix to invert.

    Returns:
        The inverse, with ``matrix * inverse`` exactly the identity.

    Raises:
        NotInvertibleError: The determinant is zero (carried on the error).
    """
    try:
        return matrix.inverse()
    except NotInvertibleError:
        det = matrix.det() if matrix.is_square() else None
        logger.error(f"Matrix of shape {matrix.shape} is not invertible")
        raise NotInvertibleError(f"det = {det}", det=det)
