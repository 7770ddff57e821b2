"""Reduction of Mahler pairs to constant coefficients.

A pair whose primary sigma-matrix is regular at 0 with invertible value there is solved directly
by the fixed-point gauge. Otherwise the diagonal is normalized, the pair is block triangularized,
the diagonal blocks are reduced recursively, and the polar part of the lower-left block is cleared
before the final fixed point.
"""

from math import lcm

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import (
    InternalConsistencyError,
    MahlerEngineError,
    ResourceCapError,
    TriangularPreconditionError,
)
from core.types import CaseKind, ReductionOutcome
from exact.matrix import RatMatrix, invert_matrix
from systems.consistency import require_consistent
from systems.gauge import GaugeCertificate, compose_certificates, gauge, identity_certificate
from systems.systems import DDSystem, SigmaSigmaSystem, System

from .fixed_point import rational_fixed_point_gauge
from .polar import polar_split_remove
from .triangular import block_triangularize, normalize_diagonal, primary_sigma

logger = get_logger(__name__)


def is_anchored(matrix: RatMatrix) -> bool:
    """Regular at 0 with invertible value there."""
    v = matrix.valuation()
    if v is not None and v < 0:
        return False
    return matrix.value_at_zero().is_invertible()


def _fixed_point_reduce(
    system: System, order: int | None, max_order: int | None
) -> tuple[System, GaugeCertificate]:
    matrix, p = primary_sigma(system)
    G = rational_fixed_point_gauge(matrix, p, order=order, max_order=max_order)
    target, certificate = gauge(system, invert_matrix(G))
    if not target.is_constant():
        raise InternalConsistencyError("fixed-point gauge left a non-constant matrix")
    return target, certificate


def _lift_gauge(certificate: GaugeCertificate, ramification: int) -> RatMatrix:
    factor = ramification // certificate.ramification
    return certificate.gauge.substitute_power(factor) if factor > 1 else certificate.gauge


def _sub_pair(system: SigmaSigmaSystem, start: int, stop: int) -> SigmaSigmaSystem:
    return SigmaSigmaSystem(
        system.case,
        system.B1.block(start, stop, start, stop),
        system.B2.block(start, stop, start, stop),
    )


def _reduce_blocks(
    system: SigmaSigmaSystem, split: int, order: int | None, max_order: int | None, depth: int
) -> tuple[SigmaSigmaSystem, GaugeCertificate]:
    n = system.n
    upper, upper_certificate = _reduce(_sub_pair(system, 0, split), order, max_order, depth + 1)
    lower, lower_certificate = _reduce(_sub_pair(system, split, n), order, max_order, depth + 1)
    N = lcm(upper_certificate.ramification, lower_certificate.ramification)
    G = RatMatrix.block_diagonal(
        [_lift_gauge(upper_certificate, N), _lift_gauge(lower_certificate, N)]
    )
    blocked, certificate = gauge(system, G, N)
    cleared, polar_certificate = polar_split_remove(blocked, split)
    certificate = compose_certificates(certificate, polar_certificate)
    if not cleared.is_constant():
        cleared, final = _fixed_point_reduce(cleared, order, max_order)
        certificate = compose_certificates(certificate, final)
    return cleared, certificate


def _reduce(
    system: System, order: int | None, max_order: int | None, depth: int
) -> tuple[System, GaugeCertificate]:
    if system.is_constant():
        return system, identity_certificate(system)
    limit = get_settings().reduction_max_depth
    if depth > limit:
        raise ResourceCapError("reduction recursion too deep", limit=limit)

    matrix, _ = primary_sigma(system)
    if is_anchored(matrix):
        return _fixed_point_reduce(system, order, max_order)

    normalized, certificate = normalize_diagonal(system)
    matrix, _ = primary_sigma(normalized)
    if is_anchored(matrix):
        reduced, final = _fixed_point_reduce(normalized, order, max_order)
        return reduced, compose_certificates(certificate, final)
    if isinstance(normalized, DDSystem):
        raise TriangularPreconditionError("case-M sigma-matrix keeps a pole at 0 after normalization")

    triangular, step, shape = block_triangularize(normalized)
    certificate = compose_certificates(certificate, step)
    if shape.outcome == ReductionOutcome.SCALAR:
        if not triangular.is_constant():
            raise InternalConsistencyError("scalar first matrix with a non-constant second matrix")
        return triangular, certificate
    reduced, step = _reduce_blocks(triangular, shape.split, order, max_order, depth)
    return reduced, compose_certificates(certificate, step)


def regular_singular_reduce(
    system: System, order: int | None = None, max_order: int | None = None
) -> tuple[System, GaugeCertificate]:
    """Gauge a consistent Mahler pair to constant coefficients.

    Args:
        system: A 2M pair, or a case-M delta/sigma pair.
        order: Starting series order of the fixed-point reconstructions.
        max_order: Cap for order doubling (defaults to the configured cap).

    Returns:
        The constant pair (in t with x = t**N) and the certificate from the input to it.

    Raises:
        InconsistentSystemError: The pair is not consistent.
        TriangularPreconditionError: A pole at 0 remains and the first matrix is not lower
            triangular with monomial diagonal.
    """
    case = system.case
    if not (
        (isinstance(system, SigmaSigmaSystem) and case.kind == CaseKind.TWO_M)
        or (isinstance(system, DDSystem) and case.kind == CaseKind.M)
    ):
        raise MahlerEngineError(f"regular-singular reduction needs a Mahler pair, not {case.kind.value}")
    require_consistent(system, "regular-singular reduction")
    reduced, certificate = _reduce(system, order, max_order, 0)
    if not reduced.is_constant():
        raise InternalConsistencyError("reduction ended with a non-constant pair")
    certificate.require()
    logger.info(
        f"Reduced {case.describe()} pair of dimension {system.n} to constants "
        f"with ramification {certificate.ramification}"
    )
    return reduced, certificate
