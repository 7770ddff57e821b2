"""Desk-scale acceptance runs over random inputs; deselect with ``-m "not slow"``."""

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from builder.annihilators import annihilators_of_closed_form
from builder.construct import build_dd_system, build_ss_system
from cli.automaton import automaton_to_mahler, brute_force_series
from cli.catalogue import all_naturals_dfao, powers_of_two_dfao, unipotent_2m_pair
from core.models import GaugeSpec, ReconstructionBudget
from core.types import CaseKind, SeriesPoint, Verdict
from exact.constants import constants_field, rationals
from exact.matrix import ConstMatrix, RatMatrix
from exact.ratfunc import RatFunc
from exact.series import expand_series
from mahler import rational_fixed_point_gauge, reduce_2m_constants
from operators.apply import apply_to_series
from operators.cases import OperatorCase, check_commutation
from operators.closed_form import ClosedFormSolution
from solver import default_constants, gen_instance, solve_rational
from systems.consistency import check_consistency
from systems.gauge import compose_certificates, gauge

from tests.conftest import polynomials, ratfuncs, small_ints, unipotent_matrices

pytestmark = pytest.mark.slow

QQ = rationals()


def _cases():
    return {
        "S": OperatorCase.shift(QQ),
        "Q": OperatorCase.q_dilation(QQ, 2),
        "M": OperatorCase.mahler(QQ, 2),
        "2Q": OperatorCase.two_q(QQ, 2, 3),
        "2M": OperatorCase.two_mahler(QQ, 2, 3),
    }


@st.composite
def regular_ratfuncs(draw, max_degree: int = 4):
    """Nonzero rational functions without a pole at 0."""
    f = draw(ratfuncs(max_degree).filter(bool))
    if f.valuation() < 0:
        f = f * RatFunc.monomial(QQ, -f.valuation())
    return f


def _spectrum(matrix):
    return sorted((matrix.field.as_rational(value), multiplicity) for value, multiplicity in matrix.eigenvalues())


class TestCommutation:
    @given(ratfuncs(5))
    @hsettings(max_examples=100, deadline=None)
    def test_mu_commutation(self, f):
        for name in ("S", "Q", "M"):
            witness = check_commutation(_cases()[name], f)
            assert witness.lhs == witness.rhs


def _two_shift_case():
    field = constants_field(("a",))
    return OperatorCase.two_shift(field, field.gen("a"))


nonzero_ints = st.integers(min_value=-4, max_value=4).filter(bool)


@st.composite
def two_term_forms(draw, name: str):
    """A rational closed form whose annihilators have order at most 2 in the named case.

    Shift cases use (u + v x)/(x - c); dilation cases use u x**b1 + v x**b2; Mahler cases
    (where every rational form has a first-order sigma relation) use g + 1.
    """
    case = _two_shift_case() if name == "2S" else _cases()[name]
    field = case.field
    if name in ("S", "2S"):
        u, v = draw(small_ints), draw(nonzero_ints)
        c = draw(st.integers(min_value=-3, max_value=3))
        f = RatFunc.from_coefficients(field, [u, v]) / RatFunc.from_coefficients(field, [-c, 1])
    elif name in ("Q", "2Q"):
        b1, b2 = draw(st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=2, unique=True))
        u, v = draw(nonzero_ints), draw(nonzero_ints)
        f = RatFunc.monomial(field, b1, u) + RatFunc.monomial(field, b2, v)
    else:
        f = draw(polynomials(2, vanish_at_zero=True)) + 1
    return case, f


class TestBuilderConsistency:
    @pytest.mark.parametrize("name", ["S", "Q", "M", "2S", "2Q", "2M"])
    @given(data=st.data())
    @hsettings(max_examples=50, deadline=None)
    def test_random_pairs(self, name, data):
        case, f = data.draw(two_term_forms(name))
        first, second = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        assert max(first.order, second.order) <= 2
        build = build_ss_system if case.is_two_sigma else build_dd_system
        system, basis = build(first, second)
        assert check_consistency(system).consistent
        assert basis.dimension == system.n

    @pytest.mark.parametrize("name", ["S", "Q", "2S", "2Q"])
    def test_second_order_pairs(self, name):
        case = _two_shift_case() if name == "2S" else _cases()[name]
        field = case.field
        if case.kind in (CaseKind.S, CaseKind.TWO_S):
            f = RatFunc.from_coefficients(field, [1, 2]) / RatFunc.from_coefficients(field, [-3, 1])
        else:
            f = RatFunc.monomial(field, -1, 2) + RatFunc.monomial(field, 2, 1)
        first, second = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        assert (first.order, second.order) == (2, 2)
        build = build_ss_system if case.is_two_sigma else build_dd_system
        system, basis = build(first, second)
        assert system.n == basis.dimension == 4
        assert check_consistency(system).consistent


class TestGaugeClosure:
    @given(st.integers(min_value=0, max_value=10**6), unipotent_matrices(), unipotent_matrices())
    @hsettings(max_examples=100, deadline=None)
    def test_group_action(self, seed, G1, G2):
        system, planted = gen_instance(OperatorCase.q_dilation(QQ, 2), 2, seed=seed)
        middle, first = gauge(system, G1)
        once, second = gauge(middle, G2)
        assert once == gauge(system, G2 * G1)[0]
        assert check_consistency(once).consistent
        assert planted.verify() and first.verify() and second.verify()
        assert compose_certificates(first, second).verify()


class TestUnipotentRoundTrip:
    @given(polynomials(6, vanish_at_zero=True))
    @hsettings(max_examples=20, deadline=None)
    def test_fixed_point_recovers_g(self, g):
        system = unipotent_2m_pair(g)
        assert check_consistency(system).consistent
        G = rational_fixed_point_gauge(system.B1, 2)
        assert G == RatMatrix(QQ, [[1, 0], [g, 1]])


class TestReductionRoundTrip:
    @pytest.mark.parametrize("seed", range(20))
    def test_planted_spectra(self, seed):
        case = OperatorCase.two_mahler(QQ, 2, 3)
        planted = default_constants(case, 2)
        spec = GaugeSpec(monomial_diagonal=True)
        system, _ = gen_instance(case, 2, gauge_spec=spec, seed=seed)
        B1, B2, certificate = reduce_2m_constants(system)
        assert B1.commutes_with(B2)
        assert _spectrum(B1) == _spectrum(planted[0])
        assert _spectrum(B2) == _spectrum(planted[1])
        assert certificate.verify()


class TestRationalityReconstruction:
    @pytest.mark.parametrize("name", ["S", "Q", "2M"])
    @given(f=regular_ratfuncs(4))
    @hsettings(max_examples=20, deadline=None)
    def test_recovers_f(self, name, f):
        case = _cases()[name]
        first, second = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        point = SeriesPoint.INFINITY if name == "S" else SeriesPoint.ZERO
        seed = expand_series(f, point, 63)
        # the sigma-operator drives the extension
        ops = (first, second) if case.is_two_sigma else (second, first)
        solution = solve_rational(ops, seed)
        assert solution.verdict == Verdict.CERTIFIED
        assert solution.value == f
        assert first.annihilates(solution.value) and second.annihilates(solution.value)


class TestAutomaticSets:
    def test_powers_of_two_pipeline(self):
        dfao = powers_of_two_dfao()
        relation = automaton_to_mahler(dfao)
        prefix = brute_force_series(dfao, 128)
        assert apply_to_series(relation.operator, prefix).is_zero()
        budget = ReconstructionBudget(order=128, max_degree=16, max_order=128)
        solution = solve_rational(relation.operator, prefix, budget)
        assert solution.verdict == Verdict.NOT_CERTIFIED

    def test_all_naturals_pipeline(self):
        dfao = all_naturals_dfao()
        relation = automaton_to_mahler(dfao)
        solution = solve_rational(relation.operator, brute_force_series(dfao, 8))
        assert solution.value == RatFunc.from_coefficients(QQ, [1], [1, -1])


def _series_solution_support(A: RatMatrix, lam, order: int) -> set[tuple[int, int]]:
    """Support of the solution x**lam * sum_k c_k x**k of delta y = A y, computed from A alone.

    A is polynomial, so ((lam + k) I - A(0)) c_k = sum_{m >= 1} A_m c_{k-m} with c_0 an
    eigenvector of A(0) for lam.
    """
    field, n = A.field, A.n
    expansions = [[expand_series(e, SeriesPoint.ZERO, order) for e in row] for row in A.rows]
    A_m = [
        ConstMatrix(field, [[s.coefficient(m) for s in row] for row in expansions])
        for m in range(order + 1)
    ]
    I = ConstMatrix.identity(field, n)
    (v,) = (A_m[0] - I * lam).nullspace()
    c = [ConstMatrix(field, [[e] for e in v])]
    for k in range(1, order + 1):
        rhs = ConstMatrix.zeros(field, n, 1)
        for m in range(1, k + 1):
            rhs = rhs + A_m[m] * c[k - m]
        c.append((I * (lam + k) - A_m[0]).inverse() * rhs)
    return {(i, k) for k, ck in enumerate(c) for i in range(n) if ck[i, 0]}


class TestLaurentStabilization:
    @pytest.mark.parametrize("seed", range(10))
    def test_support_is_stable(self, seed):
        case = OperatorCase.q_dilation(QQ, 2)
        n = 3
        # unimodular gauge keeps A polynomial with A(0) similar to the planted A0
        spec = GaugeSpec(shape="general", factors=4)
        system, _ = gen_instance(case, n, gauge_spec=spec, seed=seed)
        A0, _ = default_constants(case, n)
        assert system.A.is_polynomial()
        for lam in (A0[j, j] for j in range(n)):
            short = _series_solution_support(system.A, lam, 32)
            long = _series_solution_support(system.A, lam, 64)
            assert short and short == long
            assert max(k for _, k in long) < 32
