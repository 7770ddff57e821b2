import pytest
from hypothesis import given, settings as hsettings

from builder.annihilators import annihilators_of_closed_form
from builder.construct import build_dd_system, build_ss_system
from cli.catalogue import identity_annihilators, identity_system
from core.exceptions import InputError, TrailingCoefficientError
from core.types import OperatorKind
from exact.constants import rationals
from operators.cases import OperatorCase
from operators.closed_form import ClosedFormSolution
from operators.scalar import ScalarOperator
from systems.consistency import check_consistency

from tests.conftest import polynomials


class TestBuildDDSystem:
    def test_dilation_identity(self, QQ, mat):
        case = OperatorCase.q_dilation(QQ, 2)
        L = ScalarOperator.first_order(case, OperatorKind.DELTA, 1)
        S = ScalarOperator.first_order(case, OperatorKind.SIGMA1, 2)
        system, basis = build_dd_system(L, S)
        assert system.A == mat([["1"]])
        assert system.B == mat([["2"]])
        assert basis.dimension == 1

    def test_mahler_identity(self, QQ, mat):
        system, _ = build_dd_system(*identity_annihilators(OperatorCase.mahler(QQ, 2)))
        assert system.A == mat([["1"]])
        assert system.B == mat([["x"]])
        assert check_consistency(system).consistent

    def test_dimension_is_product_of_orders(self, QQ):
        case = OperatorCase.q_dilation(QQ, 2)
        # (delta - 1)(delta - 2) and (sigma - 2)(sigma - 4)(sigma - 8)
        L = ScalarOperator(case, OperatorKind.DELTA, (2, -3, 1))
        S = ScalarOperator(case, OperatorKind.SIGMA1, (-64, 56, -14, 1))
        system, basis = build_dd_system(L, S)
        assert system.n == 6
        assert [entry["generator"] for entry in basis.manifest()][:2] == ["sigma^0 delta^0 f", "sigma^1 delta^0 f"]
        assert check_consistency(system).consistent

    def test_mahler_trailing_coefficient(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        L = ScalarOperator.first_order(case, OperatorKind.DELTA, 1)
        S = ScalarOperator(case, OperatorKind.SIGMA1, (rf("0"), rf("-x"), rf("1")))
        with pytest.raises(TrailingCoefficientError):
            build_dd_system(L, S)

    def test_shift_trailing_coefficient_is_stripped(self, QQ, rf):
        case = OperatorCase.shift(QQ)
        L, S = identity_annihilators(case)
        padded = S.shift_left()
        assert not padded.trailing
        system, _ = build_dd_system(L, padded)
        assert system.n == 1

    def test_wrong_kinds(self, QQ):
        case = OperatorCase.mahler(QQ, 2)
        L, S = identity_annihilators(case)
        with pytest.raises(InputError):
            build_dd_system(S, L)


class TestBuildSSSystem:
    def test_two_dilations(self, QQ, mat):
        case = OperatorCase.two_q(QQ, 2, 3)
        system, _ = build_ss_system(*identity_annihilators(case))
        assert system.B1 == mat([["2"]])
        assert system.B2 == mat([["3"]])

    def test_two_mahler(self, QQ, mat):
        system = identity_system(OperatorCase.two_mahler(QQ, 2, 3))
        assert system.B1 == mat([["x"]])
        assert system.B2 == mat([["x**2"]])
        assert check_consistency(system).consistent

    def test_orders_two_and_two(self, QQ):
        case = OperatorCase.two_q(QQ, 2, 3)
        S1 = ScalarOperator(case, OperatorKind.SIGMA1, (8, -6, 1))
        S2 = ScalarOperator(case, OperatorKind.SIGMA2, (27, -12, 1))
        system, basis = build_ss_system(S1, S2)
        assert system.n == basis.dimension == 4
        assert check_consistency(system).consistent


class TestRandomPairs:
    @given(polynomials(2, vanish_at_zero=True))
    @hsettings(max_examples=15, deadline=None)
    def test_rational_closed_forms_in_dilation_case(self, g):
        case = OperatorCase.q_dilation(rationals(), 2)
        f = g + 1
        L, S = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        system, _ = build_dd_system(L, S)
        assert check_consistency(system).consistent

    @given(polynomials(2, vanish_at_zero=True))
    @hsettings(max_examples=15, deadline=None)
    def test_rational_closed_forms_in_two_mahler_case(self, g):
        case = OperatorCase.two_mahler(rationals(), 2, 3)
        f = g + 1
        S1, S2 = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        system, _ = build_ss_system(S1, S2)
        assert check_consistency(system).consistent
