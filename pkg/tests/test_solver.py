import pytest

from builder.annihilators import annihilators_of_closed_form
from cli.io import parse_ratfunc
from core.exceptions import (
    InconsistentSeedError,
    InputError,
    OperatorError,
    ResonanceError,
    UndeclaredConstantError,
)
from core.models import GaugeSpec, ReconstructionBudget
from core.types import OperatorKind, SeriesPoint, Verdict
from exact.constants import constants_field
from exact.matrix import ConstMatrix
from exact.series import PuiseuxSeriesTrunc, expand_series
from operators.cases import OperatorCase
from operators.closed_form import ClosedFormSolution
from operators.scalar import ScalarOperator
from solver import (
    default_constants,
    denominator_candidates,
    extend_series_by_operator,
    gen_instance,
    pade_reconstruct,
    solve_constant_system,
    solve_rational,
)
from systems.consistency import check_consistency, verify_reduced_form


def _powers_of_two_operator(case, rf):
    return ScalarOperator(case, OperatorKind.SIGMA1, (rf("x"), rf("-1 - x"), rf("1")))


class TestPade:
    def test_geometric(self, rf):
        s = expand_series(rf("1/(1 - x)"), SeriesPoint.ZERO, 10)
        assert pade_reconstruct(s, 3) == rf("1/(1 - x)")

    def test_quotient(self, rf):
        s = expand_series(rf("(1 + x)/(1 - 2*x)"), SeriesPoint.ZERO, 8)
        assert pade_reconstruct(s, 1) == rf("(1 + x)/(1 - 2*x)")

    def test_degree_bound_too_small(self, rf):
        s = expand_series(rf("1 + x + x**2"), SeriesPoint.ZERO, 10)
        assert pade_reconstruct(s, 0) is None

    def test_underdetermined(self, rf):
        s = expand_series(rf("1/(1 - x)"), SeriesPoint.ZERO, 2)
        assert pade_reconstruct(s, 4) is None

    def test_zero_series(self, QQ):
        assert pade_reconstruct(PuiseuxSeriesTrunc(QQ, [0], 0, 6), 2).is_zero

    def test_budget_model(self, rf):
        s = expand_series(rf("1/(1 - x)"), SeriesPoint.ZERO, 16)
        assert pade_reconstruct(s, ReconstructionBudget(order=16, max_degree=2)) == rf("1/(1 - x)")

    def test_negative_degree(self, rf):
        with pytest.raises(InputError):
            pade_reconstruct(expand_series(rf("1"), SeriesPoint.ZERO, 4), -1)


class TestBudget:
    def test_overdetermination(self):
        with pytest.raises(ValueError):
            ReconstructionBudget(order=8, max_degree=4)

    def test_doubled(self):
        budget = ReconstructionBudget(order=16, max_degree=4, max_order=64).doubled()
        assert (budget.order, budget.max_degree) == (32, 8)


class TestExtend:
    def test_dilation_monomial(self, QQ):
        case = OperatorCase.q_dilation(QQ, 2)
        op = ScalarOperator.first_order(case, OperatorKind.SIGMA1, 2)
        out = extend_series_by_operator(op, PuiseuxSeriesTrunc(QQ, [0, 1], 0, 1), 8)
        assert out.dense(0, 8) == [QQ.rational(c) for c in (0, 1, 0, 0, 0, 0, 0, 0, 0)]

    def test_powers_of_two(self, QQ, rf):
        op = _powers_of_two_operator(OperatorCase.mahler(QQ, 2), rf)
        out = extend_series_by_operator(op, PuiseuxSeriesTrunc(QQ, [0, 1], 0, 1), 20)
        expected = [1 if n and n & (n - 1) == 0 else 0 for n in range(21)]
        assert out.dense(0, 20) == [QQ.rational(c) for c in expected]

    def test_seed_contradiction(self, QQ):
        # (delta - 2) kills x**2, not x
        case = OperatorCase.q_dilation(QQ, 2)
        op = ScalarOperator.first_order(case, OperatorKind.DELTA, 2)
        with pytest.raises(InconsistentSeedError) as info:
            extend_series_by_operator(op, PuiseuxSeriesTrunc(QQ, [0, 1], 0, 1), 6)
        assert info.value.index == 1

    def test_shift_operator_at_infinity(self, QQ, rf):
        # sigma - (x - 3)/(x - 2) kills 1/(x - 3)
        case = OperatorCase.shift(QQ)
        f = rf("1/(x - 3)")
        _, S = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        seed = expand_series(f, SeriesPoint.INFINITY, 4)
        out = extend_series_by_operator(S, seed, 12)
        assert out.agrees_with(expand_series(f, SeriesPoint.INFINITY, 12))

    def test_shift_operator_resonates_at_leading_exponent(self, QQ, rf):
        case = OperatorCase.shift(QQ)
        f = rf("1/(x - 3)")
        _, S = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        empty = PuiseuxSeriesTrunc(QQ, [0], 0, 0, 1, SeriesPoint.INFINITY)
        with pytest.raises(ResonanceError) as info:
            extend_series_by_operator(S, empty, 6)
        assert info.value.index == 1


class TestSolveRational:
    def test_constant(self, QQ, rf):
        case = OperatorCase.q_dilation(QQ, 2)
        delta = ScalarOperator(case, OperatorKind.DELTA, (rf("0"), rf("1")))
        solution = solve_rational(delta, PuiseuxSeriesTrunc(QQ, [1], 0, 0))
        assert solution.certified
        assert solution.value == rf("1")

    def test_geometric_pair(self, QQ, rf):
        case = OperatorCase.q_dilation(QQ, 2)
        f = rf("1/(1 - x)")
        L, S = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        solution = solve_rational((S, L), PuiseuxSeriesTrunc(QQ, [1], 0, 0))
        assert solution.verdict == Verdict.CERTIFIED
        assert solution.value == f

    def test_powers_of_two_not_certified(self, QQ, rf):
        op = _powers_of_two_operator(OperatorCase.mahler(QQ, 2), rf)
        budget = ReconstructionBudget(order=16, max_degree=4, max_order=32)
        solution = solve_rational(op, PuiseuxSeriesTrunc(QQ, [0, 1], 0, 1), budget)
        assert solution.verdict == Verdict.NOT_CERTIFIED
        assert solution.value is None
        assert not solution.certified

    def test_denominator_hint(self, QQ, rf):
        case = OperatorCase.shift(QQ)
        L = ScalarOperator(case, OperatorKind.DELTA, (rf("-1"), rf("1 - x")))
        assert denominator_candidates(L).num.degree() == 1
        solution = solve_rational(L, PuiseuxSeriesTrunc(QQ, [1], 0, 0), use_denominator_hint=True)
        assert solution.value == rf("1/(1 - x)")

    def test_shift_pair_either_driver(self, QQ, rf):
        case = OperatorCase.shift(QQ)
        f = rf("1/(x - 3)")
        L, S = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        seed = expand_series(f, SeriesPoint.INFINITY, 4)
        for ops in ((L, S), (S, L)):
            solution = solve_rational(ops, seed)
            assert solution.certified
            assert solution.value == f

    def test_two_shift_pair(self):
        field = constants_field(("a",))
        case = OperatorCase.two_shift(field, field.gen("a"))
        f = parse_ratfunc(field, "1/(x - 3)")
        S1, S2 = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        solution = solve_rational((S1, S2), expand_series(f, SeriesPoint.INFINITY, 8))
        assert solution.verdict == Verdict.CERTIFIED
        assert solution.value == f

    def test_mixed_cases(self, QQ):
        L = ScalarOperator.first_order(OperatorCase.q_dilation(QQ, 2), OperatorKind.DELTA, 1)
        S = ScalarOperator.first_order(OperatorCase.mahler(QQ, 2), OperatorKind.SIGMA1, 1)
        with pytest.raises(InputError):
            solve_rational((L, S), PuiseuxSeriesTrunc(QQ, [1], 0, 0))


class TestConstantSystems:
    def test_dilation_eigenvalues(self, QQ):
        case = OperatorCase.q_dilation(QQ, 2)
        solutions = solve_constant_system(ConstMatrix.diagonal(QQ, [QQ.rational(1, 2), 3]), case)
        assert len(solutions) == 2

    def test_nilpotent_delta_gives_logarithms(self, QQ):
        case = OperatorCase.mahler(QQ, 2)
        solutions = solve_constant_system(ConstMatrix(QQ, [[0, 0], [1, 0]]), case)
        assert len(solutions) == 2
        assert any(term.log_power == 1 for Y in solutions for y in Y for term in y.terms)

    def test_exponential_needs_declared_constant(self, QQ):
        with pytest.raises(UndeclaredConstantError):
            solve_constant_system(ConstMatrix.identity(QQ, 1), OperatorCase.shift(QQ))

    def test_two_mahler_pair(self, QQ):
        case = OperatorCase.two_mahler(QQ, 2, 3)
        B1 = ConstMatrix.diagonal(QQ, [1, 2])
        B2 = ConstMatrix.diagonal(QQ, [1, 3])
        assert len(solve_constant_system((B1, B2), case)) == 2

    def test_two_mahler_requires_powers(self, QQ):
        case = OperatorCase.two_mahler(QQ, 2, 3)
        B = ConstMatrix.diagonal(QQ, [5])
        with pytest.raises(OperatorError):
            solve_constant_system((B, B), case)

    def test_non_semisimple(self, QQ):
        case = OperatorCase.two_q(QQ, 2, 3)
        J = ConstMatrix(QQ, [[1, 1], [0, 1]])
        with pytest.raises(OperatorError):
            solve_constant_system((J, ConstMatrix.identity(QQ, 2)), case)


class TestGenInstance:
    def test_deterministic(self, QQ):
        case = OperatorCase.two_mahler(QQ, 2, 3)
        first, _ = gen_instance(case, 2, seed=7)
        second, _ = gen_instance(case, 2, seed=7)
        assert first == second
        assert check_consistency(first).consistent

    def test_identity_gauge_keeps_planted_system(self, QQ):
        case = OperatorCase.mahler(QQ, 2)
        system, certificate = gen_instance(case, 2, gauge_spec=GaugeSpec(shape="identity"))
        A, B = default_constants(case, 2)
        assert system.A == A.to_ratmatrix()
        assert system.B == B.to_ratmatrix()
        assert verify_reduced_form(system).verified
        assert certificate.verify()

    def test_gauged_instance_is_consistent(self, QQ):
        case = OperatorCase.q_dilation(QQ, 3)
        system, certificate = gen_instance(case, 3, gauge_spec=GaugeSpec(factors=4, monomial_diagonal=True), seed=11)
        assert check_consistency(system).consistent
        assert certificate.verify()

    def test_dimension_must_be_positive(self, QQ):
        with pytest.raises(InputError):
            gen_instance(OperatorCase.mahler(QQ, 2), 0)
