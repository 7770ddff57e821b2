"""Closed-form fundamental solutions of constant-coefficient systems.

* delta-systems in cases Q and M: the columns of x**A, i.e. for v in the generalized eigenspace
  of lambda, ``x**lambda sum_k (N**k v) log(x)**k / k!`` with N = A - lambda I;
* delta-systems in case S: ``exp(lambda x) sum_k (N**k v) x**k / k!``;
* two-sigma systems: one solution per joint eigenvector of a commuting semisimple pair.
"""

from math import factorial
from typing import Any, Mapping, Sequence

from config.logging_config import get_logger
from core.exceptions import (
    InputError,
    InternalConsistencyError,
    OperatorError,
    UndeclaredConstantError,
)
from core.types import CaseKind
from exact.matrix import ConstMatrix
from exact.ratfunc import RatFunc
from operators.cases import OperatorCase
from operators.closed_form import ClosedFormSolution

logger = get_logger(__name__)

_MAX_EXPONENT = 64

SolutionVector = tuple[ClosedFormSolution, ...]


def _chain(N: ConstMatrix, v: list[Any]) -> list[list[Any]]:
    """v, N v, N**2 v, ... until the vector vanishes."""
    out = []
    while any(v) and len(out) <= N.n:
        out.append(v)
        v = N.apply(v)
    return out


def _delta_solution(
    case: OperatorCase,
    A: ConstMatrix,
    value: Any,
    v: list[Any],
    exp_values: Mapping[Any, Any],
) -> SolutionVector:
    field = case.field
    N = A - ConstMatrix.identity(field, A.n) * value
    chain = _chain(N, v)
    components = []
    for i in range(A.n):
        total = ClosedFormSolution(case)
        for k, w in enumerate(chain):
            if not w[i]:
                continue
            coeff = RatFunc.constant(field, w[i] / field.rational(factorial(k)))
            if case.kind == CaseKind.S:
                coeff = coeff * RatFunc.monomial(field, k)
                if value:
                    multiplier = exp_values.get(value)
                    if multiplier is None:
                        raise UndeclaredConstantError(f"exp({field.format(value)})")
                    term = ClosedFormSolution.exponential(case, value, (multiplier, None), coeff)
                else:
                    term = ClosedFormSolution.rational(case, coeff)
            else:
                term = ClosedFormSolution.monomial(case, value, k, coeff)
            total = total + term
        components.append(total)
    return tuple(components)


def _check_delta(case: OperatorCase, A: ConstMatrix, Y: SolutionVector) -> None:
    for i in range(A.n):
        residual = Y[i].delta()
        for j in range(A.n):
            if A[i, j]:
                residual = residual - Y[j].scale(RatFunc.constant(case.field, A[i, j]))
        if not residual.is_zero():
            raise InternalConsistencyError(f"component {i} of a constant-system solution fails")


def _solve_delta(case: OperatorCase, A: ConstMatrix, exp_values: Mapping[Any, Any]) -> list[SolutionVector]:
    field = case.field
    solutions = []
    for value, basis in A.generalized_eigenspaces():
        if case.kind == CaseKind.M and field.as_rational(value) is None:
            raise OperatorError(f"case-M eigenvalue {field.format(value)} is not rational")
        for v in basis:
            Y = _delta_solution(case, A, value, v, exp_values)
            _check_delta(case, A, Y)
            solutions.append(Y)
    return solutions


def _joint_eigenpairs(B1: ConstMatrix, B2: ConstMatrix) -> list[tuple[Any, Any, list[Any]]]:
    """(lambda1, lambda2, v) with B1 v = lambda1 v and B2 v = lambda2 v spanning the space."""
    field = B1.field
    n = B1.n
    out = []
    for value1, multiplicity in B1.eigenvalues():
        eigen = (B1 - ConstMatrix.identity(field, n) * value1).nullspace()
        if len(eigen) != multiplicity:
            raise OperatorError("first matrix is not semisimple; no closed-form fundamental set")
        V = ConstMatrix(field, [[vec[i] for vec in eigen] for i in range(n)])
        columns = [V.solve(B2.apply(vec)) for vec in eigen]
        if any(c is None for c in columns):
            raise OperatorError("matrices do not commute")
        M2 = ConstMatrix(field, [[columns[j][i] for j in range(len(eigen))] for i in range(len(eigen))])
        for value2, multiplicity2 in M2.eigenvalues():
            inner = (M2 - ConstMatrix.identity(field, M2.n) * value2).nullspace()
            if len(inner) != multiplicity2:
                raise OperatorError("second matrix is not semisimple; no closed-form fundamental set")
            for u in inner:
                out.append((value1, value2, V.apply(u)))
    return out


def _integer_log(case: OperatorCase, value1: Any, value2: Any, nonnegative: bool) -> int | None:
    field = case.field
    if case.kind == CaseKind.TWO_M:
        bases = (field.rational(case.q1), field.rational(case.q2))
    else:
        bases = (case.q1, case.q2)
    start = 0 if nonnegative else -_MAX_EXPONENT
    for k in range(start, _MAX_EXPONENT + 1):
        if field.power(bases[0], k) == value1 and field.power(bases[1], k) == value2:
            return k
    return None


def _vector(case: OperatorCase, v: list[Any], scalar: ClosedFormSolution) -> SolutionVector:
    field = case.field
    return tuple(scalar.scale(RatFunc.constant(field, c)) for c in v)


def _solve_two_sigma(
    case: OperatorCase,
    B1: ConstMatrix,
    B2: ConstMatrix,
    exponents: Mapping[tuple[Any, Any], Any],
) -> list[SolutionVector]:
    field = case.field
    solutions = []
    for value1, value2, v in _joint_eigenpairs(B1, B2):
        label = f"({field.format(value1)}, {field.format(value2)})"
        if case.kind == CaseKind.TWO_M:
            m = _integer_log(case, value1, value2, nonnegative=True)
            if m is None:
                raise OperatorError(f"eigenvalue pair {label} is not (p**m, q**m)")
            scalar = ClosedFormSolution.monomial(case, 0, m)
        elif case.kind == CaseKind.TWO_Q:
            k = _integer_log(case, value1, value2, nonnegative=False)
            if k is not None:
                scalar = ClosedFormSolution.rational(case, RatFunc.monomial(field, k))
            elif (value1, value2) in exponents:
                scalar = ClosedFormSolution.monomial(
                    case, exponents[(value1, value2)], multipliers=(value1, value2)
                )
            else:
                raise UndeclaredConstantError(f"exponent for eigenvalues {label}")
        else:
            if value1 == field.one and value2 == field.one:
                scalar = ClosedFormSolution.rational(case, RatFunc.one(field))
            elif (value1, value2) in exponents:
                scalar = ClosedFormSolution.exponential(
                    case, exponents[(value1, value2)], (value1, value2)
                )
            else:
                raise UndeclaredConstantError(f"rate for eigenvalues {label}")
        Y = _vector(case, v, scalar)
        for index, B in ((1, B1), (2, B2)):
            for i in range(B.n):
                residual = Y[i].sigma(index)
                for j in range(B.n):
                    if B[i, j]:
                        residual = residual - Y[j].scale(RatFunc.constant(field, B[i, j]))
                if not residual.is_zero():
                    raise InternalConsistencyError(f"sigma_{index} check failed for {label}")
        solutions.append(Y)
    return solutions


def solve_constant_system(
    matrices: ConstMatrix | Sequence[ConstMatrix],
    case: OperatorCase,
    exp_values: Mapping[Any, Any] | None = None,
    exponents: Mapping[tuple[Any, Any], Any] | None = None,
) -> list[SolutionVector]:
    """Fundamental set of closed-form solutions of a constant system.

    Args:
        matrices: A for delta(Y) = A Y (cases S, Q, M), or (B1, B2) for two-sigma cases.
        case: Operator case.
        exp_values: Case S: exp(lambda) for every nonzero eigenvalue lambda.
        exponents: Two-sigma cases 2Q/2S: exponent (or rate) for eigenvalue pairs that are not
            integer powers of the parameters, keyed by (lambda1, lambda2).

    Returns:
        One solution vector per basis vector; each is checked against the system before return.

    Raises:
        SpectrumNotSplitError: A characteristic polynomial does not split.
        UndeclaredConstantError: A needed transcendental constant is missing.
    """
    exp_values = exp_values or {}
    exponents = exponents or {}
    if case.is_two_sigma:
        if isinstance(matrices, ConstMatrix) or len(matrices) != 2:
            raise InputError("two-sigma cases need the pair (B1, B2)", field="matrices")
        B1, B2 = matrices
        if not B1.commutes_with(B2):
            raise OperatorError("constant two-sigma matrices must commute")
        solutions = _solve_two_sigma(case, B1, B2, exponents)
    else:
        A = matrices if isinstance(matrices, ConstMatrix) else matrices[0]
        solutions = _solve_delta(case, A, exp_values)
    logger.info(f"Constant {case.describe()} system: {len(solutions)} fundamental solutions")
    return solutions
