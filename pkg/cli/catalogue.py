"""Worked example systems and automata used by the documentation and the tests."""

from builder.construct import build_dd_system, build_ss_system
from core.types import CaseKind, OperatorKind
from exact.constants import ConstantsField, rationals
from exact.matrix import RatMatrix
from exact.ratfunc import RatFunc
from operators.cases import OperatorCase
from operators.scalar import ScalarOperator
from systems.systems import System, SigmaSigmaSystem

from .automaton import DFAO


def identity_annihilators(case: OperatorCase) -> tuple[ScalarOperator, ScalarOperator]:
    """First-order operators of the pair annihilating f = x in the given case."""
    field = case.field
    x = RatFunc.x(field)
    if case.kind == CaseKind.S:
        L = ScalarOperator(case, OperatorKind.DELTA, (RatFunc.constant(field, -1), x))
        return L, ScalarOperator.first_order(case, OperatorKind.SIGMA1, (x + 1) / x)
    if case.kind == CaseKind.Q:
        return (
            ScalarOperator.first_order(case, OperatorKind.DELTA, 1),
            ScalarOperator.first_order(case, OperatorKind.SIGMA1, case.q),
        )
    if case.kind == CaseKind.M:
        return (
            ScalarOperator.first_order(case, OperatorKind.DELTA, 1),
            ScalarOperator.first_order(case, OperatorKind.SIGMA1, RatFunc.monomial(field, case.q - 1)),
        )
    if case.kind == CaseKind.TWO_S:
        return (
            ScalarOperator.first_order(case, OperatorKind.SIGMA1, (x + 1) / x),
            ScalarOperator.first_order(case, OperatorKind.SIGMA2, (x + case.alpha) / x),
        )
    if case.kind == CaseKind.TWO_Q:
        return (
            ScalarOperator.first_order(case, OperatorKind.SIGMA1, case.q1),
            ScalarOperator.first_order(case, OperatorKind.SIGMA2, case.q2),
        )
    return (
        ScalarOperator.first_order(case, OperatorKind.SIGMA1, RatFunc.monomial(field, case.q1 - 1)),
        ScalarOperator.first_order(case, OperatorKind.SIGMA2, RatFunc.monomial(field, case.q2 - 1)),
    )


def identity_system(case: OperatorCase) -> System:
    """The one-dimensional system satisfied by f = x."""
    first, second = identity_annihilators(case)
    if case.is_two_sigma:
        return build_ss_system(first, second)[0]
    return build_dd_system(first, second)[0]


def unipotent_2m_pair(g: RatFunc, p: int = 2, q: int = 3) -> SigmaSigmaSystem:
    """Pair [[1, 0], [g(x**p) - g(x), 1]], [[1, 0], [g(x**q) - g(x), 1]] solved by [[1, 0], [g, 1]]."""
    field = g.field
    case = OperatorCase.two_mahler(field, p, q)
    one, zero = RatFunc.one(field), RatFunc.zero(field)
    return SigmaSigmaSystem(
        case,
        RatMatrix(field, [[one, zero], [g.substitute_power(p) - g, one]]),
        RatMatrix(field, [[one, zero], [g.substitute_power(q) - g, one]]),
    )


def block_example_2m(field: ConstantsField | None = None) -> SigmaSigmaSystem:
    """Consistent 2M pair (p=2, q=3) whose second matrix couples the blocks.

    B1 = [[1, 0], [x**2 - x, 1]] and B2 = [[-x, 1], [1 - x**4, x**3]]; one triangularization
    round makes B1 the identity and B2 = [[0, 1], [1, 0]].
    """
    field = field or rationals()
    x = RatFunc.x(field)
    case = OperatorCase.two_mahler(field, 2, 3)
    return SigmaSigmaSystem(
        case,
        RatMatrix(field, [[1, 0], [x**2 - x, 1]]),
        RatMatrix(field, [[-x, 1], [1 - x**4, x**3]]),
    )


def non_regular_singular_matrix(field: ConstantsField | None = None) -> RatMatrix:
    """[[1, 0], [1/x, 2]]: no consistent partner makes 0 regular singular."""
    field = field or rationals()
    return RatMatrix(field, [[1, 0], [RatFunc.monomial(field, -1), 2]])


def powers_of_two_dfao() -> DFAO:
    """Accepts n = 2**m; states: only zeros read, a single one read, rejected."""
    return DFAO(2, ((0, 1), (1, 2), (2, 2)), (0, 1, 0))


def all_naturals_dfao(base: int = 2) -> DFAO:
    return DFAO(base, (tuple([0] * base),), (1,))


def empty_set_dfao(base: int = 2) -> DFAO:
    return DFAO(base, (tuple([0] * base),), (0,))
