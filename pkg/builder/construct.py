"""Consistent first-order systems from pairs of scalar annihilators.

Generators are w[i, j] = sigma**j delta**i f. Their delta- and sigma-images reduce to
RatFunc-combinations of generators by three rewrite rules:

* delta**n f = sum_l alpha_l delta**l f with alpha_l = -a_l / a_n (from L);
* sigma**m f = sum_k beta_k sigma**k f with beta_k = -b_k / b_m (from S);
* delta sigma = mu sigma delta, hence sigma**m delta**i = mu**(-i m) delta**i sigma**m.

The module is the full abstract one: its dimension is n * m even when f satisfies extra
relations.
"""

from math import comb

from config.logging_config import get_logger
from core.exceptions import (
    DegenerateOperatorPairError,
    InputError,
    SigmaNotInvertibleError,
    TrailingCoefficientError,
)
from core.types import OperatorKind
from exact.matrix import RatMatrix
from exact.ratfunc import RatFunc
from operators.cases import OperatorCase, delta_of, sigma_power_of
from operators.scalar import ScalarOperator, strip_trailing_sigma
from systems.consistency import require_consistent
from systems.systems import DDSystem, SigmaSigmaSystem

from .basis import ModuleBasis

logger = get_logger(__name__)


def _normalized_sigma(op: ScalarOperator) -> ScalarOperator:
    """Remove a vanishing trailing coefficient where sigma is invertible."""
    if op.trailing:
        return op
    try:
        stripped = strip_trailing_sigma(op)
    except SigmaNotInvertibleError:
        logger.error(f"Trailing coefficient of a {op.kind.value}-operator vanishes in case {op.case.kind.value}")
        raise TrailingCoefficientError(
            "trailing coefficient b0 = 0; apply sigma-power preprocessing to the operator first"
        )
    logger.info(f"Stripped sigma powers: order {op.order} -> {stripped.order}")
    return stripped


def _reduction_coefficients(op: ScalarOperator) -> list[RatFunc]:
    """-c_k / c_top for k below the top order."""
    lead = op.leading
    return [-(c / lead) for c in op.coeffs[:-1]]


def _require_invertible(B: RatMatrix, name: str) -> None:
    if B.is_invertible():
        return
    kernel = B.nullspace()
    logger.error(f"Built matrix {name} is singular (kernel dimension {len(kernel)})")
    raise DegenerateOperatorPairError(f"{name} is singular", kernel=kernel)


def _check_operator(op: ScalarOperator, case: OperatorCase, kind: OperatorKind, name: str) -> None:
    if op.case != case:
        raise InputError(f"{name} belongs to a different case", field=name)
    if op.kind != kind:
        raise InputError(f"{name} must be a {kind.value}-operator, got {op.kind.value}", field=name)


def build_dd_system(L: ScalarOperator, S: ScalarOperator) -> tuple[DDSystem, ModuleBasis]:
    """Build the delta/sigma system satisfied by the generators of L f = 0, S f = 0.

    Args:
        L: delta-operator of order n.
        S: sigma-operator of order m over the same case.

    Returns:
        The consistent n*m dimensional system and the generator basis.

    Raises:
        TrailingCoefficientError: S has b0 = 0 in case M.
        DegenerateOperatorPairError: The sigma matrix is singular.
        InconsistentSystemError: L and S are not compatible.
    """
    case = L.case
    _check_operator(L, case, OperatorKind.DELTA, "L")
    _check_operator(S, case, OperatorKind.SIGMA1, "S")
    S = _normalized_sigma(S)
    field = case.field
    n, m = L.order, S.order
    basis = ModuleBasis("dd", n, m)
    alpha = _reduction_coefficients(L)
    beta = _reduction_coefficients(S)
    mu = case.mu
    zero = RatFunc.zero(field)

    # delta-iterates of every beta_k, up to delta**(n-1)
    beta_derivatives = []
    for b in beta:
        chain = [b]
        for _ in range(n - 1):
            chain.append(delta_of(chain[-1], case))
        beta_derivatives.append(chain)

    A_rows, B_rows = [], []
    for i, j in basis.labels():
        # delta w[i, j] = mu**j sigma**j delta**(i+1) f
        row = [zero] * basis.dimension
        scale = field.power(mu, j)
        if i + 1 < n:
            row[basis.index(i + 1, j)] = RatFunc.constant(field, scale)
        else:
            for l, a in enumerate(alpha):
                if a:
                    row[basis.index(l, j)] += sigma_power_of(a, case, 1, j) * scale
        A_rows.append(row)

        # sigma w[i, j] = w[i, j+1], or sigma**m delta**i f rewritten through S
        row = [zero] * basis.dimension
        if j + 1 < m:
            row[basis.index(i, j + 1)] = RatFunc.one(field)
        else:
            outer = field.power(mu, -i * m) if i else field.one
            for k in range(m):
                for l in range(i + 1):
                    d = beta_derivatives[k][i - l]
                    if not d:
                        continue
                    c = field.rational(comb(i, l)) * outer * field.power(mu, l * k)
                    row[basis.index(l, k)] += d * c
        B_rows.append(row)

    A = RatMatrix(field, A_rows)
    B = RatMatrix(field, B_rows)
    _require_invertible(B, "B")
    system = DDSystem(case, A, B)
    require_consistent(system, "build_dd_system")
    logger.info(f"Built {basis.dimension}-dimensional delta/sigma system in case {case.kind.value}")
    return system, basis


def build_ss_system(S1: ScalarOperator, S2: ScalarOperator) -> tuple[SigmaSigmaSystem, ModuleBasis]:
    """Build the two-sigma system of the generators sigma_1**i sigma_2**j f.

    sigma_1**m1 sigma_2**j f = sum_k sigma_2**j(beta1_k) w[k, j] and
    sigma_1**i sigma_2**m2 f = sum_k sigma_1**i(beta2_k) w[i, k].

    Raises:
        TrailingCoefficientError: A trailing coefficient vanishes in case 2M.
        DegenerateOperatorPairError: One of the built matrices is singular.
        InconsistentSystemError: S1 and S2 are not compatible.
    """
    case = S1.case
    _check_operator(S1, case, OperatorKind.SIGMA1, "S1")
    _check_operator(S2, case, OperatorKind.SIGMA2, "S2")
    S1, S2 = _normalized_sigma(S1), _normalized_sigma(S2)
    field = case.field
    m1, m2 = S1.order, S2.order
    basis = ModuleBasis("ss", m1, m2)
    beta1 = _reduction_coefficients(S1)
    beta2 = _reduction_coefficients(S2)
    zero = RatFunc.zero(field)

    B1_rows, B2_rows = [], []
    for i, j in basis.labels():
        row = [zero] * basis.dimension
        if i + 1 < m1:
            row[basis.index(i + 1, j)] = RatFunc.one(field)
        else:
            for k, b in enumerate(beta1):
                if b:
                    row[basis.index(k, j)] += sigma_power_of(b, case, 2, j)
        B1_rows.append(row)

        row = [zero] * basis.dimension
        if j + 1 < m2:
            row[basis.index(i, j + 1)] = RatFunc.one(field)
        else:
            for k, b in enumerate(beta2):
                if b:
                    row[basis.index(i, k)] += sigma_power_of(b, case, 1, i)
        B2_rows.append(row)

    B1 = RatMatrix(field, B1_rows)
    B2 = RatMatrix(field, B2_rows)
    _require_invertible(B1, "B1")
    _require_invertible(B2, "B2")
    system = SigmaSigmaSystem(case, B1, B2)
    require_consistent(system, "build_ss_system")
    logger.info(f"Built {basis.dimension}-dimensional two-sigma system in case {case.kind.value}")
    return system, basis
