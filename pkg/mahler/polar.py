"""Removal of the polar part of the lower-left block of a block-triangular 2M pair."""

from typing import Any

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import InternalConsistencyError, PolarPartError
from core.types import SeriesPoint
from exact.matrix import ConstMatrix, RatMatrix
from exact.ratfunc import RatFunc
from exact.series import expand_series
from systems.gauge import GaugeCertificate, gauge, identity_certificate
from systems.systems import SigmaSigmaSystem

logger = get_logger(__name__)


def principal_part(f: RatFunc) -> list[Any]:
    """Coefficients [c_1, ..., c_k] of the polar part c_1 x**-1 + ... + c_k x**-k of f at 0."""
    v = f.valuation()
    if f.is_zero or v >= 0:
        return []
    series = expand_series(f, SeriesPoint.ZERO, -1)
    return [series.coefficient(-k) for k in range(1, -v + 1)]


def _split(matrix: RatMatrix, m: int) -> tuple[RatMatrix, RatMatrix, RatMatrix, RatMatrix]:
    n = matrix.n
    return (
        matrix.block(0, m, 0, m),
        matrix.block(0, m, m, n),
        matrix.block(m, n, 0, m),
        matrix.block(m, n, m, n),
    )


def _polar_coefficients(block: RatMatrix) -> list[ConstMatrix]:
    """C_1, ..., C_k with block = sum_k C_k x**-k + (regular part)."""
    parts = [[principal_part(e) for e in row] for row in block.rows]
    depth = max((len(c) for row in parts for c in row), default=0)
    rows, cols = block.shape
    return [
        ConstMatrix(
            block.field,
            [[parts[i][j][k] if k < len(parts[i][j]) else 0 for j in range(cols)] for i in range(rows)],
        )
        for k in range(depth)
    ]


def _solve_polar_gauge(
    A11: ConstMatrix, A22: ConstMatrix, C: list[ConstMatrix], p: int
) -> list[ConstMatrix]:
    """Coefficients H_1..H_L of H(x) = sum H_k x**-k with H(x**p) A11 - A22 H(x) = -(polar part).

    In xi = 1/x the recursion H_k = A22**-1 (C_k + [p | k] H_{k/p} A11) is triangular; the solution
    is polynomial once every H_k with K/p < k <= K vanishes for some K past the degree of C.
    """
    limit = get_settings().max_order
    A22_inv = A22.inverse()
    rows, cols = A22.n, A11.n
    H = [ConstMatrix.zeros(A11.field, rows, cols)]
    last = 0
    for k in range(1, limit + 1):
        acc = C[k - 1] if k <= len(C) else ConstMatrix.zeros(A11.field, rows, cols)
        if k % p == 0:
            acc = acc + H[k // p] * A11
        H_k = A22_inv * acc
        H.append(H_k)
        if not H_k.is_zero():
            last = k
        if k >= len(C) and last <= k // p:
            return H[1 : last + 1]
    raise PolarPartError(f"polar gauge is not polynomial in 1/x up to degree {limit}")


def polar_split_remove(system: SigmaSigmaSystem, split: int) -> tuple[SigmaSigmaSystem, GaugeCertificate]:
    """Clear the polar parts of the lower-left blocks of a block-triangular 2M pair.

    The pair must be lower block triangular with constant diagonal blocks of sizes split and
    n - split. The gauge [[I, 0], [H(1/x), I]] with H polynomial and without constant term replaces
    both lower-left blocks by their regular parts and leaves the diagonal blocks untouched.

    Raises:
        PolarPartError: Diagonal blocks are not constant or the upper-right blocks are nonzero.
    """
    n = system.n
    if not 0 < split < n:
        raise PolarPartError(f"split {split} does not cut a {n}x{n} pair")
    A11, A12, A21, A22 = _split(system.B1, split)
    B11, B12, B21, B22 = _split(system.B2, split)
    if not (A12.is_zero() and B12.is_zero()):
        raise PolarPartError("pair is not lower block triangular")
    if not all(block.is_constant() for block in (A11, A22, B11, B22)):
        raise PolarPartError("diagonal blocks must be constant")

    C = _polar_coefficients(A21)
    if not C:
        logger.debug("Lower-left block has no polar part")
        return system, identity_certificate(system)

    p = system.case.mahler_exponent(1)
    field = system.field
    H = _solve_polar_gauge(A11.constant_part(), A22.constant_part(), C, p)
    H_x = RatMatrix(
        field,
        [
            [sum((RatFunc.monomial(field, -(k + 1), Hk[i, j]) for k, Hk in enumerate(H)), RatFunc.zero(field))
             for j in range(split)]
            for i in range(n - split)
        ],
    )
    G = RatMatrix.from_blocks(
        [
            [RatMatrix.identity(field, split), RatMatrix.zeros(field, split, n - split)],
            [H_x, RatMatrix.identity(field, n - split)],
        ]
    )
    target, certificate = gauge(system, G)

    new_A = _split(target.B1, split)
    new_B = _split(target.B2, split)
    regular_A21 = A21 - A21.map(
        lambda e: sum(
            (RatFunc.monomial(field, -(k + 1), c) for k, c in enumerate(principal_part(e))),
            RatFunc.zero(field),
        )
    )
    if (new_A[0], new_A[3], new_B[0], new_B[3]) != (A11, A22, B11, B22):
        raise InternalConsistencyError("polar gauge changed a diagonal block")
    if new_A[2] != regular_A21:
        raise InternalConsistencyError("polar gauge did not leave the regular part of B1")
    v = new_B[2].valuation()
    if v is not None and v < 0:
        raise InternalConsistencyError("lower-left block of B2 still has a pole at 0")
    logger.info(f"Removed polar part of depth {len(C)} with a gauge of degree {len(H)} in 1/x")
    return target, certificate
