import pytest
from hypothesis import given, settings as hsettings

from builder.annihilators import annihilators_of_closed_form
from core.exceptions import (
    AlreadyHomogeneousError,
    InputError,
    NoDerivationError,
    SigmaNotInvertibleError,
)
from core.types import OperatorKind
from exact.constants import constants_field
from exact.ratfunc import RatFunc
from exact.series import PuiseuxSeriesTrunc
from operators.apply import apply_operator, apply_to_series
from operators.cases import OperatorCase, check_commutation, delta_of, sigma_inverse_of, sigma_of
from operators.closed_form import ClosedFormSolution
from operators.scalar import ScalarOperator, homogenize, strip_trailing_sigma

from tests.conftest import ratfuncs


@pytest.fixture
def qfield():
    return constants_field(("q",))


def _powers_of_two(QQ, order):
    coeffs = [1 if n and n & (n - 1) == 0 else 0 for n in range(order + 1)]
    return PuiseuxSeriesTrunc(QQ, coeffs, 0, order)


class TestSigmaAndDelta:
    def test_shift(self, QQ, rf):
        assert sigma_of(rf("x**2"), OperatorCase.shift(QQ)) == rf("(x + 1)**2")

    def test_dilation_with_generator(self, qfield):
        case = OperatorCase.q_dilation(qfield, qfield.gen("q"))
        x = RatFunc.x(qfield)
        q = RatFunc.constant(qfield, qfield.gen("q"))
        assert sigma_of(1 / (1 - x), case) == 1 / (1 - q * x)

    def test_mahler(self, QQ, rf):
        assert sigma_of(rf("x/(1 + x)"), OperatorCase.mahler(QQ, 2)) == rf("x**2/(1 + x**2)")

    def test_second_shift(self, QQ, rf):
        case = OperatorCase.two_mahler(QQ, 2, 3)
        assert sigma_of(rf("x"), case, 2) == rf("x**3")

    def test_delta_by_case(self, QQ, rf):
        assert delta_of(rf("x**3"), OperatorCase.q_dilation(QQ, 2)) == rf("3*x**3")
        assert delta_of(rf("x**3"), OperatorCase.shift(QQ)) == rf("3*x**2")
        assert delta_of(rf("1/(1 - x)"), OperatorCase.mahler(QQ, 2)) == rf("x/(1 - x)**2")

    def test_sigma_inverse(self, QQ, rf):
        assert sigma_inverse_of(rf("x**2"), OperatorCase.shift(QQ)) == rf("(x - 1)**2")
        assert sigma_inverse_of(rf("x"), OperatorCase.q_dilation(QQ, 2)) == rf("x/2")
        with pytest.raises(SigmaNotInvertibleError):
            sigma_inverse_of(rf("x"), OperatorCase.mahler(QQ, 2))

    def test_no_derivation_in_two_sigma_cases(self, QQ, rf):
        with pytest.raises(NoDerivationError):
            delta_of(rf("x"), OperatorCase.two_mahler(QQ, 2, 3))


class TestCases:
    def test_mahler_parameters_must_be_independent(self, QQ):
        with pytest.raises(InputError):
            OperatorCase.two_mahler(QQ, 2, 4)

    def test_rational_alpha_rejected(self, QQ):
        with pytest.raises(InputError):
            OperatorCase.two_shift(QQ, 2)

    def test_describe(self, QQ):
        assert OperatorCase.two_mahler(QQ, 2, 3).describe() == "2M(p=2, q=3)"


class TestCommutation:
    def test_mahler_factor(self, QQ, rf):
        witness = check_commutation(OperatorCase.mahler(QQ, 2), rf("x"))
        assert witness.mu == 2
        assert witness.lhs == rf("2*x**2")
        assert witness.rhs == rf("2*x**2")

    def test_shift_example(self, QQ, rf):
        witness = check_commutation(OperatorCase.shift(QQ), rf("x**2"))
        assert witness.mu == 1
        assert witness.lhs == rf("2*x + 2")

    @given(ratfuncs(3))
    @hsettings(max_examples=40, deadline=None)
    def test_holds_in_every_derivation_case(self, f):
        field = f.field
        for case in (OperatorCase.shift(field), OperatorCase.q_dilation(field, 3), OperatorCase.mahler(field, 2)):
            check_commutation(case, f)

    @given(ratfuncs(2), ratfuncs(2))
    @hsettings(max_examples=40, deadline=None)
    def test_sigma_is_a_ring_endomorphism(self, f, g):
        case = OperatorCase.mahler(f.field, 3)
        assert sigma_of(f * g, case) == sigma_of(f, case) * sigma_of(g, case)
        assert sigma_of(f + g, case) == sigma_of(f, case) + sigma_of(g, case)


class TestApplyOperator:
    def test_delta_minus_one_kills_x(self, QQ):
        case = OperatorCase.q_dilation(QQ, 2)
        op = ScalarOperator.first_order(case, OperatorKind.DELTA, 1)
        assert apply_to_series(op, PuiseuxSeriesTrunc(QQ, [0, 1], 0, 6)).is_zero()

    def test_sigma_minus_q_kills_x(self, QQ):
        case = OperatorCase.q_dilation(QQ, 2)
        op = ScalarOperator.first_order(case, OperatorKind.SIGMA1, 2)
        assert apply_to_series(op, PuiseuxSeriesTrunc(QQ, [0, 1], 0, 6)).is_zero()

    def test_powers_of_two_relation(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        op = ScalarOperator(case, OperatorKind.SIGMA1, (rf("x"), rf("-1 - x"), rf("1")))
        residual = apply_to_series(op, _powers_of_two(QQ, 16))
        assert residual.is_zero()
        assert residual.order >= 16

    def test_rational_target(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        op = ScalarOperator.first_order(case, OperatorKind.SIGMA1, rf("1/(1 + x)"))
        assert apply_operator(op, rf("1/(1 - x)")).is_zero


class TestScalarOperator:
    def test_zero_leading_coefficient(self, QQ):
        case = OperatorCase.mahler(QQ, 2)
        with pytest.raises(InputError):
            ScalarOperator(case, OperatorKind.SIGMA1, (RatFunc.one(QQ), RatFunc.zero(QQ)))

    def test_primitive_clears_denominators(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        op = ScalarOperator(case, OperatorKind.SIGMA1, (rf("-1/(2*x)"), rf("1/x")))
        assert op.primitive().coeffs == (rf("-1/2"), rf("1"))

    def test_monic(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        op = ScalarOperator(case, OperatorKind.SIGMA1, (rf("x"), rf("2*x")))
        assert op.monic().coeffs == (rf("1/2"), rf("1"))

    def test_annihilates(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        op = ScalarOperator.first_order(case, OperatorKind.SIGMA1, rf("x"))
        assert op.annihilates(rf("x"))
        assert not op.annihilates(rf("x**2"))


class TestHomogenize:
    def test_mahler_example(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        op = ScalarOperator.first_order(case, OperatorKind.SIGMA1, 1)
        expected = ScalarOperator(case, OperatorKind.SIGMA1, (rf("x"), rf("-1 - x"), rf("1")))
        assert homogenize(op, rf("-x")) == expected

    def test_delta(self, QQ, rf):
        case = OperatorCase.shift(QQ)
        op = ScalarOperator(case, OperatorKind.DELTA, (rf("0"), rf("1")))
        assert homogenize(op, rf("1")).coeffs == (rf("0"), rf("0"), rf("1"))

    def test_shift_sigma(self, QQ, rf):
        case = OperatorCase.shift(QQ)
        op = ScalarOperator.first_order(case, OperatorKind.SIGMA1, 1)
        assert homogenize(op, rf("1")).coeffs == (rf("1"), rf("-2"), rf("1"))

    def test_zero_rhs(self, QQ, rf):
        op = ScalarOperator.first_order(OperatorCase.mahler(QQ, 2), OperatorKind.SIGMA1, 1)
        with pytest.raises(AlreadyHomogeneousError):
            homogenize(op, rf("0"))


class TestStripTrailingSigma:
    def test_mahler_refuses(self, QQ, rf):
        case = OperatorCase.mahler(QQ, 2)
        op = ScalarOperator(case, OperatorKind.SIGMA1, (rf("0"), rf("-x"), rf("1")))
        with pytest.raises(SigmaNotInvertibleError):
            strip_trailing_sigma(op)

    def test_shift_divides_out(self, QQ, rf):
        case = OperatorCase.shift(QQ)
        op = ScalarOperator(case, OperatorKind.SIGMA1, (rf("0"), rf("-1"), rf("1")))
        assert strip_trailing_sigma(op).order == 1


class TestAnnihilators:
    def test_rational_in_dilation_case(self, QQ, rf):
        case = OperatorCase.q_dilation(QQ, 2)
        f = rf("1/(1 - x)")
        L, S = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        assert L.kind == OperatorKind.DELTA and S.kind == OperatorKind.SIGMA1
        assert L.annihilates(f) and S.annihilates(f)

    def test_square_root_in_mahler_case(self, QQ):
        case = OperatorCase.mahler(QQ, 3)
        cf = ClosedFormSolution.monomial(case, QQ.rational(1, 2))
        L, S = annihilators_of_closed_form(cf, case)
        assert apply_operator(S, cf).is_zero()
        assert apply_operator(L, cf).is_zero()

    def test_two_sigma_pair(self, QQ, rf):
        case = OperatorCase.two_mahler(QQ, 2, 3)
        f = rf("x/(1 + x)")
        S1, S2 = annihilators_of_closed_form(ClosedFormSolution.rational(case, f), case)
        assert S1.kind == OperatorKind.SIGMA1 and S2.kind == OperatorKind.SIGMA2
        assert S1.annihilates(f) and S2.annihilates(f)
