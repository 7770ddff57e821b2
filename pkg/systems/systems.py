"""First-order system pairs.

A :class:`DDSystem` is delta(Y) = A Y together with sigma(Y) = B Y; a :class:`SigmaSigmaSystem`
is sigma_1(Y) = B1 Y together with sigma_2(Y) = B2 Y.
"""

from dataclasses import dataclass
from typing import Union

from core.exceptions import InputError, NotInvertibleError
from exact.constants import ConstantsField
from exact.matrix import RatMatrix
from operators.cases import OperatorCase, delta_of, sigma_of, sigma_power_of


def sigma_matrix(matrix: RatMatrix, case: OperatorCase, index: int = 1) -> RatMatrix:
    """Apply sigma_index entrywise."""
    return matrix.map(lambda e: sigma_of(e, case, index))


def sigma_power_matrix(matrix: RatMatrix, case: OperatorCase, index: int, k: int) -> RatMatrix:
    return matrix.map(lambda e: sigma_power_of(e, case, index, k))


def delta_matrix(matrix: RatMatrix, case: OperatorCase) -> RatMatrix:
    """Apply the derivation entrywise."""
    return matrix.map(lambda e: delta_of(e, case))


def _check_square(name: str, matrix: RatMatrix, n: int | None = None) -> int:
    rows, cols = matrix.shape
    if rows != cols:
        raise InputError(f"{name} must be square, got {rows}x{cols}", field=name)
    if n is not None and rows != n:
        raise InputError(f"{name} has dimension {rows}, expected {n}", field=name)
    return rows


def _check_invertible(name: str, matrix: RatMatrix) -> None:
    if not matrix.is_invertible():
        raise NotInvertibleError(f"{name} is singular", det=matrix.det())


@dataclass(frozen=True)
class DDSystem:
    """delta(Y) = A Y, sigma(Y) = B Y over one of the cases S, Q, M."""

    case: OperatorCase
    A: RatMatrix
    B: RatMatrix

    def __post_init__(self):
        if self.case.is_two_sigma:
            raise InputError(f"case {self.case.kind.value} has no derivation", field="case")
        n = _check_square("A", self.A)
        _check_square("B", self.B, n)
        _check_invertible("B", self.B)

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def field(self) -> ConstantsField:
        return self.case.field

    def with_matrices(self, A: RatMatrix, B: RatMatrix) -> "DDSystem":
        return DDSystem(self.case, A, B)

    def is_constant(self) -> bool:
        return self.A.is_constant() and self.B.is_constant()

    def matrices(self) -> dict[str, RatMatrix]:
        return {"A": self.A, "B": self.B}


@dataclass(frozen=True)
class SigmaSigmaSystem:
    """sigma_1(Y) = B1 Y, sigma_2(Y) = B2 Y over one of the cases 2S, 2Q, 2M."""

    case: OperatorCase
    B1: RatMatrix
    B2: RatMatrix

    def __post_init__(self):
        if not self.case.is_two_sigma:
            raise InputError(f"case {self.case.kind.value} has a single sigma", field="case")
        n = _check_square("B1", self.B1)
        _check_square("B2", self.B2, n)
        _check_invertible("B1", self.B1)
        _check_invertible("B2", self.B2)

    @property
    def n(self) -> int:
        return self.B1.n

    @property
    def field(self) -> ConstantsField:
        return self.case.field

    def with_matrices(self, B1: RatMatrix, B2: RatMatrix) -> "SigmaSigmaSystem":
        return SigmaSigmaSystem(self.case, B1, B2)

    def is_constant(self) -> bool:
        return self.B1.is_constant() and self.B2.is_constant()

    def matrices(self) -> dict[str, RatMatrix]:
        return {"B1": self.B1, "B2": self.B2}


System = Union[DDSystem, SigmaSigmaSystem]
