"""Diagonal normalization and block triangularization of Mahler pairs.

Both steps act on lower-triangular first matrices. Normalization removes the x-power of every
diagonal entry with a ramified diagonal gauge; triangularization then grows an identity block in
the bottom-right corner of B1 until either B1 is scalar or both matrices are lower block
triangular.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Any

from config.logging_config import get_logger
from core.exceptions import (
    InternalConsistencyError,
    ResourceCapError,
    TriangularPreconditionError,
)
from core.types import CaseKind, ReductionOutcome
from exact.matrix import RatMatrix, invert_matrix
from exact.ratfunc import RatFunc
from systems.consistency import require_consistent
from systems.gauge import GaugeCertificate, compose_certificates, gauge, identity_certificate
from systems.systems import DDSystem, SigmaSigmaSystem, System

logger = get_logger(__name__)


@dataclass(frozen=True)
class BlockShape:
    """Outcome of block_triangularize.

    ``split`` is the size of the upper-left block for BLOCK outcomes; ``scalar`` is d with
    B1 = d I for SCALAR outcomes.
    """

    outcome: ReductionOutcome
    split: int | None = None
    scalar: Any = None


def primary_sigma(system: System) -> tuple[RatMatrix, int]:
    """The sigma-matrix that drives the reduction and its Mahler exponent."""
    case = system.case
    if isinstance(system, SigmaSigmaSystem) and case.kind == CaseKind.TWO_M:
        return system.B1, case.mahler_exponent(1)
    if isinstance(system, DDSystem) and case.kind == CaseKind.M:
        return system.B, case.mahler_exponent(1)
    raise TriangularPreconditionError(f"Mahler reduction does not apply to case {case.kind.value}")


def normalize_diagonal(system: System) -> tuple[System, GaugeCertificate]:
    """Remove the x-adic valuation of every diagonal entry of the primary sigma-matrix.

    For a diagonal entry c x**s (1 + O(x)) the exponent e = s / (p - 1) is solved by t**(-e N)
    over x = t**N, where N clears every denominator of e.

    Raises:
        TriangularPreconditionError: The primary sigma-matrix is not lower triangular.
    """
    matrix, p = primary_sigma(system)
    if not matrix.is_lower_triangular():
        raise TriangularPreconditionError("first sigma-matrix is not lower triangular")
    exponents = [Fraction(matrix[i, i].valuation(), p - 1) for i in range(matrix.n)]
    if not any(exponents):
        return system, identity_certificate(system)

    N = lcm(*(e.denominator for e in exponents))
    field = system.field
    G = RatMatrix.diagonal(field, [RatFunc.monomial(field, int(-e * N)) for e in exponents])
    target, certificate = gauge(system, G, N)
    normalized, _ = primary_sigma(target)
    if any(normalized[i, i].valuation() != 0 for i in range(normalized.n)):
        raise InternalConsistencyError("diagonal normalization left an x-power on the diagonal")
    logger.debug(f"Normalized diagonal exponents {[str(e) for e in exponents]} with ramification {N}")
    return target, certificate


def _identity_block(A: RatMatrix, d: Any) -> int:
    n = A.n
    m = 0
    while m < n:
        size = m + 1
        block = A.block(n - size, n, n - size, n)
        if block != RatMatrix.identity(A.field, size) * d:
            break
        m = size
    return m


def _swap_gauge(system: SigmaSigmaSystem, i: int) -> tuple[SigmaSigmaSystem, GaugeCertificate]:
    perm = list(range(system.n))
    perm[i], perm[i + 1] = perm[i + 1], perm[i]
    P = RatMatrix(system.field, [[1 if j == perm[k] else 0 for j in range(system.n)] for k in range(system.n)])
    return gauge(system, P)


def _check_preconditions(A: RatMatrix) -> Any:
    if not A.is_lower_triangular():
        raise TriangularPreconditionError("first sigma-matrix is not lower triangular")
    if not all(A[i, i].is_constant() for i in range(A.n)):
        raise TriangularPreconditionError("diagonal of the first sigma-matrix is not constant")
    return A[A.n - 1, A.n - 1].constant_value()


def block_triangularize(
    system: SigmaSigmaSystem,
) -> tuple[SigmaSigmaSystem, GaugeCertificate, BlockShape]:
    """Gauge a consistent 2M pair until B1 is scalar or both matrices are block triangular.

    Each round picks the leftmost column l of the identity block where B2 has a nonzero entry
    above the block, and its uppermost nonzero row r. The entry d = B2[r, l] is constant; the
    gauge S(t)**-1 with S the identity whose column r is B2[:, l](t) / d (over x = t**q) clears
    column r of B1 off the diagonal, and adjacent transpositions move r to the block boundary.

    Returns:
        The transformed pair, the composed certificate and the shape reached.

    Raises:
        TriangularPreconditionError: B1 is not lower triangular with constant diagonal.
    """
    if not isinstance(system, SigmaSigmaSystem) or system.case.kind != CaseKind.TWO_M:
        raise TriangularPreconditionError("block triangularization needs a 2M pair")
    require_consistent(system, "block triangularization")
    q = system.case.mahler_exponent(2)
    n = system.n
    d = _check_preconditions(system.B1)

    current = system
    certificate = identity_certificate(system)
    for round_ in range(n + 1):
        A, B = current.B1, current.B2
        m = _identity_block(A, d)
        if m == n:
            logger.info(f"First matrix reduced to the scalar {current.field.format(d)}")
            return current, certificate, BlockShape(ReductionOutcome.SCALAR, scalar=d)
        top = n - m
        columns = [l for l in range(top, n) if any(B[j, l] for j in range(top))]
        if not columns:
            logger.info(f"Pair is lower block triangular with split {top}")
            return current, certificate, BlockShape(ReductionOutcome.BLOCK, split=top)

        l = columns[0]
        r = next(j for j in range(n) if B[j, l])
        pivot = B[r, l]
        if not pivot.is_constant():
            raise InternalConsistencyError(f"pivot B2[{r}, {l}] is not constant")
        if A[r, r].constant_value() != d:
            raise InternalConsistencyError(f"diagonal entry B1[{r}, {r}] differs from the block scalar")

        S = RatMatrix.identity(current.field, n)
        for j in range(n):
            S = S.with_entry(j, r, B[j, l] / pivot)
        current_next, step = gauge(current, invert_matrix(S), q)
        column = current_next.B1.column(r)
        if any(column[j] for j in range(n) if j != r) or column[r] != RatFunc.constant(current.field, d):
            raise InternalConsistencyError(f"column {r} of B1 was not cleared")
        certificate = compose_certificates(certificate, step)
        current = current_next

        while r < top - 1:
            current_next, step = _swap_gauge(current, r)
            certificate = compose_certificates(certificate, step)
            current = current_next
            r += 1
        logger.debug(f"Round {round_}: identity block grew past size {m}")

    raise ResourceCapError("block triangularization did not terminate", limit=n + 1)
