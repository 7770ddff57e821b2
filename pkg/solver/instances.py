"""Consistent test instances: planted constant systems gauged by random invertible matrices."""

import random
from typing import Sequence

from config.logging_config import get_logger
from core.exceptions import InputError
from core.models import GaugeSpec
from core.types import CaseKind
from exact.matrix import ConstMatrix, RatMatrix
from exact.ratfunc import RatFunc
from operators.cases import OperatorCase
from systems.consistency import check_consistency, verify_reduced_form
from systems.gauge import GaugeCertificate, gauge
from systems.systems import DDSystem, SigmaSigmaSystem, System

logger = get_logger(__name__)


def default_constants(case: OperatorCase, n: int) -> tuple[ConstMatrix, ConstMatrix]:
    """Planted constants satisfying the case's spectral constraints."""
    field = case.field
    if case.is_two_sigma:
        return (
            ConstMatrix.diagonal(field, [j + 1 for j in range(n)]),
            ConstMatrix.diagonal(field, [2 * j + 1 for j in range(n)]),
        )
    B = ConstMatrix.diagonal(field, [j + 1 for j in range(n)])
    if case.kind == CaseKind.M:
        return ConstMatrix.zeros(field, n), B
    return ConstMatrix.diagonal(field, [field.rational(j, n + 1) for j in range(n)]), B


def _planted_system(case: OperatorCase, constants: Sequence[ConstMatrix]) -> System:
    first, second = (m.to_ratmatrix() for m in constants)
    if case.is_two_sigma:
        system = SigmaSigmaSystem(case, first, second)
        if not constants[0].commutes_with(constants[1]):
            raise InputError("planted two-sigma constants must commute", field="constants")
        return system
    system = DDSystem(case, first, second)
    report = verify_reduced_form(system)
    if not report.verified:
        raise InputError(
            f"planted constants violate the case constraints: {'; '.join(report.violations)}",
            field="constants",
        )
    return system


def _random_polynomial(rng: random.Random, field, degree: int, height: int) -> RatFunc:
    coeffs = [rng.randint(-height, height) for _ in range(degree + 1)]
    if not any(coeffs):
        coeffs[-1] = 1
    return RatFunc.from_coefficients(field, coeffs)


def random_gauge(rng: random.Random, field, n: int, spec: GaugeSpec) -> RatMatrix:
    """Product of unipotent elementary matrices, optionally times a diagonal of x powers.

    The determinant is a monomial by construction.
    """
    G = RatMatrix.identity(field, n)
    if spec.shape == "identity" or n == 0:
        return G
    for _ in range(spec.factors):
        if n == 1:
            break
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        if spec.shape == "lower" and j > i:
            i, j = j, i
        E = RatMatrix.identity(field, n).with_entry(
            i, j, _random_polynomial(rng, field, spec.degree, spec.height)
        )
        G = E * G
    if spec.monomial_diagonal:
        D = RatMatrix.diagonal(field, [RatFunc.monomial(field, rng.randint(0, 2)) for _ in range(n)])
        G = D * G
    return G


def gen_instance(
    case: OperatorCase,
    n: int,
    constants: Sequence[ConstMatrix] | None = None,
    gauge_spec: GaugeSpec | None = None,
    seed: int = 0,
) -> tuple[System, GaugeCertificate]:
    """Generate a consistent system by gauging planted constants.

    Args:
        case: Operator case.
        n: Dimension.
        constants: Planted (A, B) or (B1, B2); defaults to :func:`default_constants`.
        gauge_spec: Distribution of the random gauge.
        seed: Seed of the private random generator.

    Returns:
        The gauged system and the certificate from the planted system to it.
    """
    if n < 1:
        raise InputError(f"dimension must be positive, got {n}", field="n")
    constants = tuple(constants) if constants is not None else default_constants(case, n)
    if len(constants) != 2 or any(m.shape != (n, n) for m in constants):
        raise InputError(f"need two {n}x{n} constant matrices", field="constants")
    gauge_spec = gauge_spec or GaugeSpec()

    planted = _planted_system(case, constants)
    rng = random.Random(seed)
    G = random_gauge(rng, case.field, n, gauge_spec)
    system, certificate = gauge(planted, G)
    if not check_consistency(system).consistent:
        raise InputError("generated instance is not consistent", field="constants")
    logger.info(f"Generated {case.describe()} instance of dimension {n} with seed {seed}")
    return system, certificate
