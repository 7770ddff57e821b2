"""Nilpotent normal form of case-M pairs with constant delta-matrix, and its logarithmic gauge."""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

from config.logging_config import get_logger
from core.exceptions import (
    InconsistentSystemError,
    InputError,
    InternalConsistencyError,
    MahlerEngineError,
)
from core.types import CaseKind
from exact.matrix import ConstMatrix, RatMatrix
from exact.ratfunc import RatFunc
from systems.consistency import constant_pair, require_consistent
from systems.gauge import GaugeCertificate, compose_certificates, gauge, identity_certificate
from systems.systems import DDSystem

logger = get_logger(__name__)


def nilpotent_normalize(system: DDSystem) -> tuple[ConstMatrix, ConstMatrix, GaugeCertificate]:
    """Make the delta-matrix nilpotent and the sigma-matrix constant.

    A constant gauge puts A in block form along its generalized eigenspaces; the diagonal gauge
    t**(-N lambda) over x = t**N then subtracts each rational eigenvalue lambda, leaving N (A - D)
    nilpotent. Consistency forces the new sigma-matrix to be constant.

    Args:
        system: Consistent case-M pair whose delta-matrix is constant.

    Returns:
        (A', B', certificate) with A' nilpotent, B' constant and q A' B' = B' A'.

    Raises:
        SpectrumNotSplitError: The characteristic polynomial of A does not split.
        MahlerEngineError: An eigenvalue is not rational.
    """
    if not isinstance(system, DDSystem) or system.case.kind != CaseKind.M:
        raise InputError("nilpotent normalization needs a case-M delta/sigma pair", field="case")
    if not system.A.is_constant():
        raise MahlerEngineError("nilpotent normalization needs a constant delta-matrix")
    require_consistent(system, "nilpotent normalization")
    field = system.field
    n = system.n
    q = system.case.mahler_exponent(1)
    A = system.A.constant_part()

    certificate = identity_certificate(system)
    current = system
    if not A.is_nilpotent():
        spaces = A.generalized_eigenspaces()
        exponents: list[Fraction] = []
        columns: list[list] = []
        for value, basis in spaces:
            rational = field.as_rational(value)
            if rational is None:
                raise MahlerEngineError(f"eigenvalue {field.format(value)} is not rational")
            exponents.extend([Fraction(rational)] * len(basis))
            columns.extend(basis)
        P = ConstMatrix(field, [[columns[j][i] for j in range(n)] for i in range(n)])
        if not P.is_identity():
            current, step = gauge(current, P.inverse().to_ratmatrix())
            certificate = compose_certificates(certificate, step)
        N = lcm(*(e.denominator for e in exponents))
        D = RatMatrix.diagonal(field, [RatFunc.monomial(field, int(-e * N)) for e in exponents])
        current, step = gauge(current, D, N)
        certificate = compose_certificates(certificate, step)

    if not current.is_constant():
        raise InternalConsistencyError("sigma-matrix is not constant after nilpotent normalization")
    A_new, B_new = constant_pair(current)
    if not A_new.is_nilpotent():
        raise InternalConsistencyError("delta-matrix is not nilpotent after normalization")
    if A_new * B_new * q != B_new * A_new:
        raise InternalConsistencyError("normal form violates q A B = B A")
    logger.info(f"Nilpotent normal form reached with ramification {certificate.ramification}")
    return A_new, B_new, certificate.require()


@dataclass(frozen=True)
class LogGauge:
    """V = sum_k coefficients[k] log(x)**k with Z = V Y removing a nilpotent delta-matrix."""

    coefficients: tuple[ConstMatrix, ...]
    sigma_matrix: ConstMatrix


def log_normalize(A: ConstMatrix, B: ConstMatrix, q: int) -> LogGauge:
    """Logarithmic gauge exp(-log(x) A) for a nilpotent normal form.

    The gauged pair is delta(Z) = 0, Z(x**q) = B Z; the identity exp(q log(x) A) B = B exp(log(x) A)
    is checked coefficientwise as q**k A**k B = B A**k.

    Raises:
        MahlerEngineError: A is not nilpotent.
        InconsistentSystemError: q A B = B A fails.
    """
    if not A.is_nilpotent():
        raise MahlerEngineError("logarithmic gauge needs a nilpotent delta-matrix")
    field = A.field
    coefficients = [ConstMatrix.identity(field, A.n)]
    power = ConstMatrix.identity(field, A.n)
    k = 0
    while True:
        if power * B * (q**k) != B * power:
            raise InconsistentSystemError(f"q^{k} A^{k} B differs from B A^{k}")
        k += 1
        power = power * A
        if power.is_zero():
            break
        coefficients.append(power * field.rational((-1) ** k, factorial(k)))
    logger.debug(f"Logarithmic gauge of degree {len(coefficients) - 1}")
    return LogGauge(tuple(coefficients), B)
