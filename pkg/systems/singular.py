"""Inventory of the singular points of a system (diagnostic only)."""

from dataclasses import dataclass, field
from typing import Any

from sympy.polys.polyerrors import PolynomialError

from config.logging_config import get_logger
from core.types import CaseKind
from exact.matrix import RatMatrix, invert_matrix

from .systems import DDSystem, System

logger = get_logger(__name__)


@dataclass(frozen=True)
class SingularFactor:
    """An irreducible denominator factor of one matrix, with its root when it is linear."""

    matrix: str
    factor: Any
    root: Any = None

    def describe(self, fmt) -> str:
        text = str(self.factor.as_expr())
        if self.root is not None:
            return f"{self.matrix}: {text} (root {fmt(self.root)})"
        return f"{self.matrix}: {text}"


@dataclass(frozen=True)
class SingularInventory:
    """Finite poles away from 0, plus which matrices are singular at 0 and at infinity."""

    finite: list[SingularFactor] = field(default_factory=list)
    at_zero: list[str] = field(default_factory=list)
    at_infinity: list[str] = field(default_factory=list)
    zero_exempt: bool = False

    def is_empty_away_from_zero_and_infinity(self) -> bool:
        return not self.finite

    def matrices_with_finite_poles(self) -> list[str]:
        return sorted({f.matrix for f in self.finite})


def _factors(poly: Any) -> list[Any]:
    try:
        _, factors = poly.factor_list()
        return [f.monic() for f, _ in factors]
    except (PolynomialError, NotImplementedError) as e:
        logger.warning(f"Factorization failed ({e}); listing the whole denominator")
        return [poly.monic()]


def _scan(name: str, matrix: RatMatrix, inventory: dict) -> None:
    ring = matrix.field.poly_ring
    x = ring.gens[0]
    seen = inventory["seen"]
    for entry in matrix.entries():
        if not entry:
            continue
        if entry.valuation_at_infinity() < 0 and name not in inventory["at_infinity"]:
            inventory["at_infinity"].append(name)
        if entry.den.degree() == 0:
            continue
        for factor in _factors(entry.den):
            if factor == x:
                if name not in inventory["at_zero"]:
                    inventory["at_zero"].append(name)
                continue
            if (name, factor) in seen:
                continue
            seen.add((name, factor))
            root = None
            if factor.degree() == 1:
                root = -factor.get((0,), matrix.field.zero)
            inventory["finite"].append(SingularFactor(name, factor, root))


def singular_points(system: System) -> SingularInventory:
    """Poles of the coefficient matrices and of the sigma-matrix inverses.

    Args:
        system: A delta/sigma or two-sigma system.

    Returns:
        Inventory of finite irreducible pole factors per matrix, and flags for 0 and infinity.
        In the dilation and Mahler cases 0 is the allowed exceptional point.
    """
    inventory: dict = {"finite": [], "at_zero": [], "at_infinity": [], "seen": set()}
    if isinstance(system, DDSystem):
        matrices = [("A", system.A), ("B", system.B), ("B^-1", invert_matrix(system.B))]
    else:
        matrices = [
            ("B1", system.B1),
            ("B2", system.B2),
            ("B1^-1", invert_matrix(system.B1)),
            ("B2^-1", invert_matrix(system.B2)),
        ]
    for name, matrix in matrices:
        _scan(name, matrix, inventory)
    exempt = system.case.kind in (CaseKind.Q, CaseKind.M, CaseKind.TWO_Q, CaseKind.TWO_M)
    return SingularInventory(
        finite=inventory["finite"],
        at_zero=inventory["at_zero"],
        at_infinity=inventory["at_infinity"],
        zero_exempt=exempt,
    )
