"""Consistency conditions and statement-level checks of reduced forms."""

from dataclasses import dataclass, field
from typing import Any

from config.logging_config import get_logger
from core.exceptions import InconsistentSystemError, SpectrumNotSplitError
from core.types import CaseKind, Verdict
from exact.matrix import ConstMatrix, RatMatrix

from .systems import DDSystem, SigmaSigmaSystem, System, delta_matrix, sigma_matrix

logger = get_logger(__name__)


@dataclass(frozen=True)
class ConsistencyReport:
    """Outcome of a consistency check with the residual matrix."""

    verdict: Verdict
    residual: RatMatrix

    @property
    def consistent(self) -> bool:
        return self.verdict == Verdict.CONSISTENT

    def residual_valuation(self) -> int | None:
        """Smallest x-adic valuation among residual entries (None when consistent)."""
        return self.residual.valuation()


def _report(residual: RatMatrix) -> ConsistencyReport:
    verdict = Verdict.CONSISTENT if residual.is_zero() else Verdict.INCONSISTENT
    return ConsistencyReport(verdict=verdict, residual=residual)


def check_consistency_dd(system: DDSystem) -> ConsistencyReport:
    """Residual delta(B) - mu sigma(A) B + B A; zero exactly when the pair is consistent."""
    case = system.case
    residual = (
        delta_matrix(system.B, case)
        - sigma_matrix(system.A, case) * system.B * case.mu
        + system.B * system.A
    )
    return _report(residual)


def check_consistency_ss(system: SigmaSigmaSystem) -> ConsistencyReport:
    """Residual sigma_1(B2) B1 - sigma_2(B1) B2."""
    case = system.case
    residual = sigma_matrix(system.B2, case, 1) * system.B1 - sigma_matrix(system.B1, case, 2) * system.B2
    return _report(residual)


def check_consistency(system: System) -> ConsistencyReport:
    if isinstance(system, DDSystem):
        return check_consistency_dd(system)
    return check_consistency_ss(system)


def require_consistent(system: System, purpose: str) -> None:
    """Raise InconsistentSystemError (with the residual) unless the system is consistent."""
    report = check_consistency(system)
    if not report.consistent:
        logger.error(f"Inconsistent system rejected by {purpose}")
        raise InconsistentSystemError(f"{purpose} requires a consistent system", report.residual)


@dataclass(frozen=True)
class ReducedFormReport:
    """Violations of the constant normal form for a case; empty means verified."""

    violations: list[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> Verdict:
        return Verdict.VERIFIED if self.verified else Verdict.INCONSISTENT


def _integer_spaced(field: Any, values: list[Any]) -> list[tuple[Any, Any]]:
    pairs = []
    for i, a in enumerate(values):
        for b in values[i + 1 :]:
            d = field.as_integer(a - b)
            if d is not None and d != 0:
                pairs.append((a, b))
    return pairs


def verify_reduced_form(system: DDSystem) -> ReducedFormReport:
    """Check the constant normal forms of delta/sigma systems.

    * Q: A, B constant and commuting; no two eigenvalues of A differ by a nonzero integer.
    * M: A, B constant with q A B = B A; eigenvalues of A rational.
    * S: A, B constant and commuting; B upper triangular.
    """
    violations: list[str] = []
    field_ = system.field
    if not system.is_constant():
        return ReducedFormReport(["A and B must be constant"])
    A, B = system.A.constant_part(), system.B.constant_part()
    kind = system.case.kind

    if kind == CaseKind.M:
        if A * B * system.case.mu != B * A:
            violations.append("q A B != B A")
    elif not A.commutes_with(B):
        violations.append("A and B do not commute")
    if kind == CaseKind.S and not B.is_upper_triangular():
        violations.append("B is not upper triangular")

    if kind in (CaseKind.Q, CaseKind.M):
        try:
            eigenvalues = [value for value, _ in A.eigenvalues()]
        except SpectrumNotSplitError as e:
            violations.append(str(e))
            eigenvalues = []
        if kind == CaseKind.Q:
            for a, b in _integer_spaced(field_, eigenvalues):
                violations.append(
                    f"eigenvalues {field_.format(a)} and {field_.format(b)} differ by an integer"
                )
        else:
            for value in eigenvalues:
                if field_.as_rational(value) is None:
                    violations.append(f"eigenvalue {field_.format(value)} is not rational")
    return ReducedFormReport(violations)


def constant_pair(system: System) -> tuple[ConstMatrix, ConstMatrix]:
    """The two coefficient matrices of a constant system as constant matrices."""
    mats = list(system.matrices().values())
    return mats[0].constant_part(), mats[1].constant_part()
